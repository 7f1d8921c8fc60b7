#include "vms/output.hpp"

#include <fstream>
#include <iomanip>
#include <limits>

namespace vms {

namespace {

std::ofstream open_output(const std::filesystem::path& path)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << std::setprecision(17);
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace

void write_vtk(const Mesh& mesh, const State& state, std::ostream& out)
{
    const int dim = mesh.dim();
    if (state.dim != dim || state.velocity.size() != mesh.num_nodes() * dim ||
        state.pressure.size() != mesh.num_nodes() || state.fine.size() != mesh.num_elements() * dim) {
        throw Error("write_vtk: state does not match mesh");
    }
    const auto old_precision = out.precision(17);
    const Index nn = mesh.num_nodes();
    const Index ne = mesh.num_elements();
    const int nen = mesh.nodes_per_element();

    out << "# vtk DataFile Version 3.0\n";
    out << "vmsflow solution\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << nn << " double\n";
    for (Index n = 0; n < nn; ++n) {
        const Vec3 p = mesh.point(n);
        out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
    }
    out << "CELLS " << ne << ' ' << ne * (nen + 1) << '\n';
    for (Index e = 0; e < ne; ++e) {
        out << nen;
        for (Index n : mesh.element(e)) out << ' ' << n;
        out << '\n';
    }
    out << "CELL_TYPES " << ne << '\n';
    const int cell_type = dim == 2 ? 5 : 10;
    for (Index e = 0; e < ne; ++e) out << cell_type << '\n';

    out << "POINT_DATA " << nn << '\n';
    out << "VECTORS velocity double\n";
    for (Index n = 0; n < nn; ++n) {
        const Vec3 v = state.node_velocity(n);
        out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    }
    out << "SCALARS pressure double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (Index n = 0; n < nn; ++n) out << state.pressure[n] << '\n';

    out << "CELL_DATA " << ne << '\n';
    out << "VECTORS fine_velocity double\n";
    for (Index e = 0; e < ne; ++e) {
        const Vec3 b = state.element_fine(e);
        out << b[0] << ' ' << b[1] << ' ' << b[2] << '\n';
    }
    out.precision(old_precision);
}

void write_vtk(const Mesh& mesh, const State& state, const std::filesystem::path& path)
{
    auto out = open_output(path);
    write_vtk(mesh, state, out);
    finish(out, path);
}

PointOutsideMesh::PointOutsideMesh(const Vec3& p)
    : Error("point (" + std::to_string(p[0]) + ", " + std::to_string(p[1]) + ", " + std::to_string(p[2]) +
            ") lies outside the mesh")
{
}

PointValue sample_point(const Mesh& mesh, const State& state, const Vec3& x)
{
    const int dim = mesh.dim();
    const int nen = dim + 1;
    const double tol = 1e-10;
    Index best = -1;
    double best_min = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_xi;
    Eigen::MatrixXd J(dim, dim);
    for (Index e = 0; e < mesh.num_elements(); ++e) {
        const auto nodes = mesh.element(e);
        const Vec3 x0 = mesh.point(nodes[0]);
        for (int k = 0; k < dim; ++k) {
            const Vec3 xk = mesh.point(nodes[static_cast<std::size_t>(k) + 1]);
            for (int i = 0; i < dim; ++i) J(i, k) = xk[i] - x0[i];
        }
        const Eigen::VectorXd rhs = (x - x0).head(dim);
        const Eigen::VectorXd xi = J.partialPivLu().solve(rhs);
        const double lmin = std::min(1.0 - xi.sum(), xi.minCoeff());
        if (lmin > best_min) {
            best_min = lmin;
            best = e;
            best_xi = xi;
        }
        if (lmin >= 0.0) break;
    }
    if (best < 0 || best_min < -tol) throw PointOutsideMesh(x);

    const BasisValues bv = eval_basis(dim, best_xi);
    PointValue out;
    out.element = best;
    out.velocity = bv.bubble * state.element_fine(best);
    const auto nodes = mesh.element(best);
    for (int a = 0; a < nen; ++a) {
        const Index n = nodes[static_cast<std::size_t>(a)];
        out.velocity += bv.N[a] * state.node_velocity(n);
        out.pressure += bv.N[a] * state.pressure[n];
    }
    return out;
}

Centerline extract_centerline(const Mesh& mesh, const State& state, int axis, const Vec3& through, int samples)
{
    if (axis < 0 || axis >= mesh.dim()) throw ConfigError("centerline axis out of range");
    if (samples < 2) throw ConfigError("centerline needs at least 2 samples");
    const auto [lo, hi] = mesh.bounding_box();
    Centerline line;
    line.axis = axis;
    line.samples.reserve(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        Vec3 x = through;
        if (mesh.dim() == 2) x[2] = 0.0;
        x[axis] = lo[axis] + (hi[axis] - lo[axis]) * s / (samples - 1);
        const auto v = sample_point(mesh, state, x);
        line.samples.push_back({x[axis], v.velocity, v.pressure});
    }
    return line;
}

void write_centerline_csv(const Centerline& line, std::ostream& out)
{
    const auto old_precision = out.precision(17);
    out << "coordinate,vx,vy,vz,p\n";
    for (const auto& s : line.samples) {
        out << s.coordinate << ',' << s.velocity[0] << ',' << s.velocity[1] << ',' << s.velocity[2] << ','
            << s.pressure << '\n';
    }
    out.precision(old_precision);
}

void write_centerline_csv(const Centerline& line, const std::filesystem::path& path)
{
    auto out = open_output(path);
    write_centerline_csv(line, out);
    finish(out, path);
}

void write_trace_csv(const ConvergenceTrace& trace, std::ostream& out)
{
    const auto old_precision = out.precision(17);
    out << "iteration,residual,continuity,linear_iterations,linear_residual\n";
    for (const auto& r : trace.iterations) {
        out << r.iteration << ',' << r.residual_norm << ',' << r.continuity_norm << ',' << r.linear_iterations << ','
            << r.linear_residual << '\n';
    }
    out.precision(old_precision);
}

void write_trace_csv(const ConvergenceTrace& trace, const std::filesystem::path& path)
{
    auto out = open_output(path);
    write_trace_csv(trace, out);
    finish(out, path);
}

void write_manifest(const Manifest& entries, std::ostream& out)
{
    for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
}

void write_manifest(const Manifest& entries, const std::filesystem::path& path)
{
    auto out = open_output(path);
    write_manifest(entries, out);
    finish(out, path);
}

}  // namespace vms
