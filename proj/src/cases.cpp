#include "vms/cases.hpp"

#include "vms/solver.hpp"

#include <cmath>
#include <numbers>

namespace vms {

namespace {

constexpr double pi = std::numbers::pi;

// k-th derivative of f(s) = sin^2(pi s)
double f_derivative(double s, int k)
{
    switch (k) {
    case 0: return std::sin(pi * s) * std::sin(pi * s);
    case 1: return pi * std::sin(2.0 * pi * s);
    case 2: return 2.0 * pi * pi * std::cos(2.0 * pi * s);
    case 3: return -4.0 * pi * pi * pi * std::sin(2.0 * pi * s);
    default: throw Error("f_derivative: order above 3");
    }
}

BoundaryConditions no_slip(const Mesh& mesh)
{
    BoundaryConditions bcs;
    for (const auto& tag : mesh.tag_names()) bcs.dirichlet.push_back({tag, {}});
    return bcs;
}

}  // namespace

ManufacturedSolution::ManufacturedSolution(int dim, double viscosity) : dim_(dim), nu_(viscosity)
{
    if (dim != 2 && dim != 3) throw ConfigError("manufactured solution needs dim 2 or 3");
    curl_.setZero();
    if (dim == 2) {
        curl_(0, 1) = 1.0;
        curl_(1, 0) = -1.0;
    } else {
        curl_ << 0.0, 1.0, -1.0,
                 -1.0, 0.0, 1.0,
                 1.0, -1.0, 0.0;
    }
}

double ManufacturedSolution::dphi(const Vec3& x, const std::array<int, 3>& orders) const
{
    double v = 1.0;
    for (int k = 0; k < dim_; ++k) v *= f_derivative(x[k], orders[static_cast<std::size_t>(k)]);
    return v;
}

Vec3 ManufacturedSolution::velocity(const Vec3& x) const
{
    Vec3 v = Vec3::Zero();
    for (int j = 0; j < dim_; ++j) {
        std::array<int, 3> o{0, 0, 0};
        o[static_cast<std::size_t>(j)] = 1;
        const double d = dphi(x, o);
        for (int i = 0; i < dim_; ++i) v[i] += curl_(i, j) * d;
    }
    return v;
}

Eigen::Matrix3d ManufacturedSolution::velocity_gradient(const Vec3& x) const
{
    Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
    for (int j = 0; j < dim_; ++j) {
        for (int l = 0; l < dim_; ++l) {
            std::array<int, 3> o{0, 0, 0};
            ++o[static_cast<std::size_t>(j)];
            ++o[static_cast<std::size_t>(l)];
            const double d = dphi(x, o);
            for (int i = 0; i < dim_; ++i) g(i, l) += curl_(i, j) * d;
        }
    }
    return g;
}

Vec3 ManufacturedSolution::velocity_laplacian(const Vec3& x) const
{
    Vec3 lap = Vec3::Zero();
    for (int j = 0; j < dim_; ++j) {
        for (int l = 0; l < dim_; ++l) {
            std::array<int, 3> o{0, 0, 0};
            ++o[static_cast<std::size_t>(j)];
            o[static_cast<std::size_t>(l)] += 2;
            const double d = dphi(x, o);
            for (int i = 0; i < dim_; ++i) lap[i] += curl_(i, j) * d;
        }
    }
    return lap;
}

double ManufacturedSolution::pressure(const Vec3& x) const
{
    double p = 1.0;
    for (int k = 0; k < dim_; ++k) p *= std::sin(pi * x[k]);
    return p - std::pow(2.0 / pi, dim_);
}

Vec3 ManufacturedSolution::pressure_gradient(const Vec3& x) const
{
    Vec3 g = Vec3::Zero();
    for (int i = 0; i < dim_; ++i) {
        double v = pi * std::cos(pi * x[i]);
        for (int k = 0; k < dim_; ++k) {
            if (k != i) v *= std::sin(pi * x[k]);
        }
        g[i] = v;
    }
    return g;
}

Vec3 ManufacturedSolution::body_force(const Vec3& x) const
{
    const Vec3 v = velocity(x);
    return velocity_gradient(x) * v - 2.0 * nu_ * velocity_laplacian(x) + pressure_gradient(x);
}

CaseData CaseDefinition::case_data() const
{
    CaseData d;
    d.viscosity = viscosity;
    d.body_force = body_force;
    d.convection = convection;
    attach_tractions(bcs, d);
    return d;
}

CaseDefinition case_body_force_cavity(int dim, int divisions, double viscosity)
{
    if (divisions < 1) throw ConfigError("divisions must be at least 1");
    if (!(viscosity > 0.0)) throw ConfigError("viscosity must be positive");
    CaseDefinition c;
    c.name = "bodyforce";
    c.mesh = std::make_shared<const Mesh>(generate_box_mesh(dim, {divisions, divisions, divisions}));
    c.viscosity = viscosity;
    c.bcs = no_slip(*c.mesh);
    c.bcs.pressure_pin = PressurePin{"", Vec3(0.5, 0.5, dim == 3 ? 0.5 : 0.0), 0.0};
    c.exact.emplace(dim, viscosity);
    const ManufacturedSolution ms = *c.exact;
    c.bcs.pressure_pin->value = ms.pressure(c.mesh->point(resolve_pin_node(*c.mesh, *c.bcs.pressure_pin)));
    c.body_force = [ms](const Vec3& x, double) { return ms.body_force(x); };
    return c;
}

CaseDefinition case_lid_cavity_3d(int divisions, double reynolds)
{
    if (divisions < 1) throw ConfigError("divisions must be at least 1");
    if (!(reynolds > 0.0)) throw ConfigError("Reynolds number must be positive");
    CaseDefinition c;
    c.name = "lid3d";
    c.mesh = std::make_shared<const Mesh>(generate_box_mesh(3, {divisions, divisions, divisions}));
    c.viscosity = 1.0 / reynolds;
    for (const char* wall : {"xmin", "xmax", "ymin", "ymax", "zmin"}) c.bcs.dirichlet.push_back({wall, {}});
    c.bcs.dirichlet.push_back({"zmax", [](const Vec3&, double) { return Vec3(1.0, 0.0, 0.0); }});
    c.bcs.pressure_pin = PressurePin{"", Vec3::Constant(0.5), 0.0};
    c.centerline = CenterlineSpec{2, Vec3::Constant(0.5), 101};
    return c;
}

CaseDefinition case_jet_orifice_3d(int divisions, double viscosity, double dt, int n_steps, const JetGeometry& geometry)
{
    if (divisions < 1) throw ConfigError("divisions must be at least 1");
    if (!(viscosity > 0.0)) throw ConfigError("viscosity must be positive");
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    if (!(geometry.diameter > 0.0)) throw ConfigError("orifice diameter must be positive");
    CaseDefinition c;
    c.name = "jet";
    c.mesh = std::make_shared<const Mesh>(generate_box_mesh(3, {divisions, divisions, divisions}));
    c.viscosity = viscosity;
    c.dt = dt;
    c.n_steps = n_steps;

    const double radius = 0.5 * geometry.diameter;
    const double cy = geometry.center_y;
    const double cz = geometry.center_z;
    const double tol = 1e-9 * radius;

    // nodes on the orifice diameter through the row nearest its centre
    double nearest = std::numeric_limits<double>::infinity();
    for (Index n : c.mesh->nodes_with_tag("xmin")) nearest = std::min(nearest, std::abs(c.mesh->point(n)[2] - cz));
    int across = 0;
    for (Index n : c.mesh->nodes_with_tag("xmin")) {
        const Vec3 p = c.mesh->point(n);
        if (std::abs(std::abs(p[2] - cz) - nearest) <= tol && std::abs(p[1] - cy) <= radius + tol) ++across;
    }
    if (across < 2) {
        throw ConfigError("orifice of diameter " + std::to_string(geometry.diameter) +
                          " is not resolved: fewer than 2 nodes across at " + std::to_string(divisions) +
                          " divisions");
    }

    c.bcs.dirichlet.push_back({"xmin", [radius, cy, cz](const Vec3& x, double) {
                                   const double r2 = (x[1] - cy) * (x[1] - cy) + (x[2] - cz) * (x[2] - cz);
                                   return Vec3(std::max(0.0, 1.0 - r2 / (radius * radius)), 0.0, 0.0);
                               }});
    for (const char* open : {"xmax", "ymin", "ymax", "zmin", "zmax"}) c.bcs.tractions.push_back({open, {}});
    c.centerline = CenterlineSpec{0, Vec3(0.5, cy, cz), 101};
    return c;
}

ErrorNorms manufactured_errors(const Mesh& mesh, const State& state, const ManufacturedSolution& exact,
                               int quadrature_degree)
{
    const int dim = mesh.dim();
    const int nen = dim + 1;
    const auto basis = TabulatedBasis::build(dim, quadrature_degree);

    double volume = 0.0;
    double p_mean = 0.0;
    for (Index e = 0; e < mesh.num_elements(); ++e) {
        const auto kin = kinematics(mesh, e, basis.values.front().DN);
        const auto nodes = mesh.element(e);
        for (Index q = 0; q < basis.rule.size(); ++q) {
            const auto& bv = basis.values[static_cast<std::size_t>(q)];
            const double w = basis.rule.weights[q] * kin.detJ;
            double p = 0.0;
            for (int a = 0; a < nen; ++a) p += bv.N[a] * state.pressure[nodes[static_cast<std::size_t>(a)]];
            p_mean += w * p;
            volume += w;
        }
    }
    p_mean /= volume;

    ErrorNorms out;
    for (Index e = 0; e < mesh.num_elements(); ++e) {
        const auto kin = kinematics(mesh, e, basis.values.front().DN);
        const auto nodes = mesh.element(e);
        const Vec3 beta = state.element_fine(e);
        for (Index q = 0; q < basis.rule.size(); ++q) {
            const auto& bv = basis.values[static_cast<std::size_t>(q)];
            const double w = basis.rule.weights[q] * kin.detJ;
            Vec3 x = Vec3::Zero();
            Vec3 v = bv.bubble * beta;
            double p = 0.0;
            for (int a = 0; a < nen; ++a) {
                const Index n = nodes[static_cast<std::size_t>(a)];
                x += bv.N[a] * mesh.point(n);
                v += bv.N[a] * state.node_velocity(n);
                p += bv.N[a] * state.pressure[n];
            }
            out.velocity_l2 += w * (v - exact.velocity(x)).squaredNorm();
            const double dp = (p - p_mean) - exact.pressure(x);
            out.pressure_l2 += w * dp * dp;
        }
    }
    out.velocity_l2 = std::sqrt(out.velocity_l2);
    out.pressure_l2 = std::sqrt(out.pressure_l2);
    return out;
}

double observed_order(double h_coarse, double e_coarse, double h_fine, double e_fine)
{
    return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

}  // namespace vms
