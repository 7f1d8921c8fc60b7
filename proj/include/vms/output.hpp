#pragma once

#include "vms/solver.hpp"

#include <filesystem>
#include <ostream>
#include <utility>

namespace vms {

/// Legacy ASCII VTK unstructured grid with point vectors `velocity`, point
/// scalars `pressure` and the cell vector `fine_velocity` (beta, the fine
/// velocity at the element centroid). 17 significant digits.
void write_vtk(const Mesh& mesh, const State& state, std::ostream& out);
void write_vtk(const Mesh& mesh, const State& state, const std::filesystem::path& path);

class PointOutsideMesh : public Error {
public:
    explicit PointOutsideMesh(const Vec3& p);
};

struct PointValue {
    Index element = -1;
    Vec3 velocity = Vec3::Zero();  // N v_bar + b beta
    double pressure = 0.0;
};

/// Interpolated solution at x. Throws PointOutsideMesh.
[[nodiscard]] PointValue sample_point(const Mesh& mesh, const State& state, const Vec3& x);

struct CenterlineSample {
    double coordinate = 0.0;
    Vec3 velocity = Vec3::Zero();
    double pressure = 0.0;
};

struct Centerline {
    int axis = 0;
    std::vector<CenterlineSample> samples;
};

/// `samples` uniform points along the line parallel to `axis` through
/// `through`, spanning the mesh bounding box.
[[nodiscard]] Centerline extract_centerline(const Mesh& mesh, const State& state, int axis, const Vec3& through,
                                            int samples = 101);

/// Columns: coordinate,vx,vy,vz,p
void write_centerline_csv(const Centerline& line, std::ostream& out);
void write_centerline_csv(const Centerline& line, const std::filesystem::path& path);

/// Columns: iteration,residual,continuity,linear_iterations,linear_residual
void write_trace_csv(const ConvergenceTrace& trace, std::ostream& out);
void write_trace_csv(const ConvergenceTrace& trace, const std::filesystem::path& path);

using Manifest = std::vector<std::pair<std::string, std::string>>;

/// One `key = value` line per entry.
void write_manifest(const Manifest& entries, std::ostream& out);
void write_manifest(const Manifest& entries, const std::filesystem::path& path);

}  // namespace vms
