#include "vms/verify.hpp"

#include <random>

namespace vms {

namespace {

Eigen::VectorXd stack(const ElementResidual& r)
{
    Eigen::VectorXd out(r.Rc.size() + r.Rp.size() + r.Rf.size());
    out << r.Rc, r.Rp, r.Rf;
    return out;
}

double block_error(const Eigen::MatrixXd& exact, const Eigen::MatrixXd& fd)
{
    const double scale = fd.norm();
    const double diff = (exact - fd).norm();
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace

TangentCheck check_tangent(const Mesh& mesh, const TabulatedBasis& basis, const CaseData& data, int n_states,
                           unsigned seed, double step)
{
    const int dim = mesh.dim();
    const int nen = dim + 1;
    const int nc = nen * dim;
    const int n = nc + nen + dim;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<Index> pick(0, mesh.num_elements() - 1);

    TangentCheck out;
    for (int s = 0; s < n_states; ++s) {
        const Index e = pick(rng);
        ElementState st;
        st.velocity = Eigen::MatrixXd::NullaryExpr(nen, dim, [&] { return unit(rng); });
        st.pressure = Eigen::VectorXd::NullaryExpr(nen, [&] { return unit(rng); });
        st.fine = Eigen::VectorXd::NullaryExpr(dim, [&] { return unit(rng); });
        const auto sys = element_tangent(mesh, e, basis, st, data);

        Eigen::MatrixXd fd(n, n);
        for (int c = 0; c < n; ++c) {
            ElementState plus = st;
            ElementState minus = st;
            auto perturb = [&](ElementState& x, double d) {
                if (c < nc) x.velocity(c / dim, c % dim) += d;
                else if (c < nc + nen) x.pressure[c - nc] += d;
                else x.fine[c - nc - nen] += d;
            };
            perturb(plus, step);
            perturb(minus, -step);
            fd.col(c) = (stack(element_residual(mesh, e, basis, plus, data)) -
                         stack(element_residual(mesh, e, basis, minus, data))) /
                        (2.0 * step);
        }

        const std::pair<const char*, double> blocks[] = {
            {"dRc/dv", block_error(sys.dRc_dv, fd.block(0, 0, nc, nc))},
            {"dRc/dp", block_error(sys.dRc_dp, fd.block(0, nc, nc, nen))},
            {"dRc/dbeta", block_error(sys.dRc_db, fd.block(0, nc + nen, nc, dim))},
            {"dRp/dv", block_error(sys.dRp_dv, fd.block(nc, 0, nen, nc))},
            {"dRp/dp", block_error(sys.dRp_dp, fd.block(nc, nc, nen, nen))},
            {"dRp/dbeta", block_error(sys.dRp_db, fd.block(nc, nc + nen, nen, dim))},
            {"dRf/dv", block_error(sys.dRf_dv, fd.block(nc + nen, 0, dim, nc))},
            {"dRf/dp", block_error(sys.dRf_dp, fd.block(nc + nen, nc, dim, nen))},
            {"dRf/dbeta", block_error(sys.dRf_db, fd.block(nc + nen, nc + nen, dim, dim))},
        };
        for (const auto& [name, err] : blocks) {
            if (out.worst_element < 0 || err > out.max_relative_error) {
                out.max_relative_error = err;
                out.worst_element = e;
                out.worst_block = name;
            }
        }
        ++out.states;
    }
    return out;
}

PathComparison compare_paths(const CaseDefinition& c, const NewtonConfig& cfg)
{
    const CaseData data = c.case_data();
    std::vector<State> iterates[2];
    const SolvePath paths[2] = {SolvePath::condensed, SolvePath::monolithic};
    PathComparison out;
    out.converged = true;
    for (int k = 0; k < 2; ++k) {
        Discretization disc(*c.mesh, c.bcs, paths[k]);
        NewtonConfig local = cfg;
        auto& store = iterates[k];
        local.on_iterate = [&store](int, const State& s) { store.push_back(s); };
        try {
            (void)newton_solve(disc, data, State::zero(*c.mesh), local);
        } catch (const NewtonError&) {
            out.converged = false;
        }
    }
    const std::size_t n = std::min(iterates[0].size(), iterates[1].size());
    out.iterations = static_cast<int>(n);
    if (iterates[0].size() != iterates[1].size()) out.converged = false;
    for (std::size_t i = 0; i < n; ++i) {
        const State& a = iterates[0][i];
        const State& b = iterates[1][i];
        out.max_difference = std::max({out.max_difference, (a.velocity - b.velocity).cwiseAbs().maxCoeff(),
                                       (a.pressure - b.pressure).cwiseAbs().maxCoeff(),
                                       (a.fine - b.fine).cwiseAbs().maxCoeff()});
    }
    return out;
}

ManufacturedStudy manufactured_study(int dim, const std::vector<int>& divisions, double viscosity,
                                     const NewtonConfig& cfg)
{
    if (divisions.size() < 2) throw ConfigError("manufactured study needs at least two refinement levels");
    ManufacturedStudy study;
    for (int d : divisions) {
        const CaseDefinition c = case_body_force_cavity(dim, d, viscosity);
        Discretization disc(*c.mesh, c.bcs, SolvePath::condensed);
        const auto result = newton_solve(disc, c.case_data(), State::zero(*c.mesh), cfg);
        ManufacturedLevel level;
        level.divisions = d;
        level.h = 1.0 / d;
        level.errors = manufactured_errors(*c.mesh, result.state, *c.exact);
        level.newton_iterations = result.trace.newton_iterations();
        study.levels.push_back(level);
    }
    const auto& a = study.levels[study.levels.size() - 2];
    const auto& b = study.levels.back();
    study.velocity_order = observed_order(a.h, a.errors.velocity_l2, b.h, b.errors.velocity_l2);
    study.pressure_order = observed_order(a.h, a.errors.pressure_l2, b.h, b.errors.pressure_l2);
    return study;
}

}  // namespace vms
