#pragma once

#include "vms/assembly.hpp"
#include "vms/kernel.hpp"

#include <memory>
#include <optional>

namespace vms {

/// Closed-form divergence-free velocity v* = curl(phi c) with
/// phi = prod_i sin^2(pi x_i) (c = e_z in 2D, (1,1,1) in 3D), a zero-mean
/// pressure p*, and the body force b* = v*.grad v* - 2 nu lap v* + grad p*.
class ManufacturedSolution {
public:
    ManufacturedSolution(int dim, double viscosity);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] double viscosity() const noexcept { return nu_; }
    [[nodiscard]] Vec3 velocity(const Vec3& x) const;
    /// grad(i, j) = d v_i / d x_j
    [[nodiscard]] Eigen::Matrix3d velocity_gradient(const Vec3& x) const;
    [[nodiscard]] Vec3 velocity_laplacian(const Vec3& x) const;
    [[nodiscard]] double pressure(const Vec3& x) const;
    [[nodiscard]] Vec3 pressure_gradient(const Vec3& x) const;
    [[nodiscard]] Vec3 body_force(const Vec3& x) const;

private:
    // derivative of phi with orders[k] applied along axis k
    [[nodiscard]] double dphi(const Vec3& x, const std::array<int, 3>& orders) const;

    int dim_;
    double nu_;
    Eigen::Matrix3d curl_;  // v_i = sum_j curl_(i, j) d phi / d x_j
};

struct CenterlineSpec {
    int axis = 2;
    Vec3 through = Vec3::Constant(0.5);  // the line passes through this point
    int samples = 101;
};

struct CaseDefinition {
    std::string name;
    std::shared_ptr<const Mesh> mesh;
    double viscosity = 1.0;
    BoundaryConditions bcs;
    VectorField body_force;  // empty: zero
    bool convection = true;
    double dt = 0.0;  // transient parameters; 0 when steady
    int n_steps = 0;
    std::optional<CenterlineSpec> centerline;
    std::vector<Vec3> probes;
    std::optional<ManufacturedSolution> exact;

    /// Physical data for the kernels with tractions attached; steady.
    [[nodiscard]] CaseData case_data() const;
};

/// Unit box, no-slip everywhere, pressure pinned at the node nearest the
/// centre, body force from the manufactured fields.
[[nodiscard]] CaseDefinition case_body_force_cavity(int dim, int divisions, double viscosity);

/// Unit cube, no-slip on five faces, lid z = 1 moving with (1,0,0), pressure
/// pinned at the centre, nu = 1/Re. Lid values win on lid edges.
[[nodiscard]] CaseDefinition case_lid_cavity_3d(int divisions, double reynolds);

struct JetGeometry {
    double diameter = 0.25;
    double center_y = 0.5;
    double center_z = 0.5;
};

/// Unit cube; the x = 0 face is a no-slip wall except for a circular orifice
/// with paraboloid inflow v_x = 1 - r^2/R^2; all other faces traction free.
/// Throws ConfigError when fewer than two nodes lie across the orifice.
[[nodiscard]] CaseDefinition case_jet_orifice_3d(int divisions, double viscosity = 0.001, double dt = 0.01,
                                                 int n_steps = 100, const JetGeometry& geometry = {});

struct ErrorNorms {
    double velocity_l2 = 0.0;
    double pressure_l2 = 0.0;  // both pressures mean-subtracted
};

/// L2 errors of the total velocity v_bar + b beta and of the pressure.
[[nodiscard]] ErrorNorms manufactured_errors(const Mesh& mesh, const State& state,
                                             const ManufacturedSolution& exact, int quadrature_degree = 8);

/// log(e_coarse / e_fine) / log(h_coarse / h_fine)
[[nodiscard]] double observed_order(double h_coarse, double e_coarse, double h_fine, double e_fine);

}  // namespace vms
