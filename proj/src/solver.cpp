#include "vms/solver.hpp"

#include "vms/parallel.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace vms {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

LinearSolverKind parse_linear_solver(const std::string& name)
{
    if (name == "gmres") return LinearSolverKind::gmres;
    if (name == "dense") return LinearSolverKind::dense_direct;
    if (name == "direct" || name == "sparse") return LinearSolverKind::sparse_direct;
    throw ConfigError("unknown linear solver '" + name + "' (expected gmres, direct or dense)");
}

std::string to_string(LinearSolverKind kind)
{
    switch (kind) {
    case LinearSolverKind::gmres: return "gmres";
    case LinearSolverKind::dense_direct: return "dense";
    case LinearSolverKind::sparse_direct: return "direct";
    }
    return "unknown";
}

double ConvergenceTrace::final_log_ratio() const
{
    if (iterations.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double last = iterations.back().residual_norm;
    const double prev = iterations[iterations.size() - 2].residual_norm;
    return std::log(last) / std::log(prev);
}

double ConvergenceTrace::final_quadratic_constant() const
{
    if (iterations.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double last = iterations.back().residual_norm;
    const double prev = iterations[iterations.size() - 2].residual_norm;
    return last / (prev * prev);
}

Discretization::Discretization(const Mesh& mesh, BoundaryConditions bcs, SolvePath path, int quadrature_degree)
    : mesh_(&mesh),
      bcs_(std::move(bcs)),
      dofs_(build_dofmap(mesh, bcs_, path)),
      assembler_(std::make_unique<Assembler>(mesh, dofs_)),
      basis_(TabulatedBasis::build(mesh.dim(), quadrature_degree > 0 ? quadrature_degree
                                                                      : default_quadrature_degree(mesh.dim())))
{
}

Discretization::Linearization Discretization::linearize(const State& state, const CaseData& data, int workers) const
{
    const Mesh& mesh = *mesh_;
    const Index ne = mesh.num_elements();
    const int dim = mesh.dim();
    Linearization lin;

    auto t0 = Clock::now();
    std::vector<ElementSystem> systems(static_cast<std::size_t>(ne));
    parallel_for(ne, workers, [&](Index begin, Index end) {
        for (Index e = begin; e < end; ++e) {
            systems[static_cast<std::size_t>(e)] = element_tangent(mesh, e, basis_, gather(mesh, e, state), data);
        }
    });
    lin.phases.kernel = seconds_since(t0);

    t0 = Clock::now();
    std::vector<ElementContribution> contribs(static_cast<std::size_t>(ne));
    if (path() == SolvePath::condensed) lin.condensed.resize(static_cast<std::size_t>(ne));
    parallel_for(ne, workers, [&](Index begin, Index end) {
        for (Index e = begin; e < end; ++e) {
            const auto k = static_cast<std::size_t>(e);
            if (path() == SolvePath::condensed) {
                lin.condensed[k] = condense_element(systems[k]);
                interleave(lin.condensed[k], dim, contribs[k].matrix, contribs[k].residual);
            } else {
                interleave(systems[k], dim, contribs[k].matrix, contribs[k].residual);
            }
        }
    });
    lin.phases.condense = seconds_since(t0);

    t0 = Clock::now();
    lin.system = assembler_->assemble(contribs);
    double cont = 0.0;
    Eigen::VectorXd rp = Eigen::VectorXd::Zero(mesh.num_nodes());
    for (Index e = 0; e < ne; ++e) {
        const auto nodes = mesh.element(e);
        for (std::size_t a = 0; a < nodes.size(); ++a) rp[nodes[a]] += systems[static_cast<std::size_t>(e)].Rp[static_cast<Index>(a)];
    }
    for (Index n = 0; n < mesh.num_nodes(); ++n) {
        if (!dofs_.constrained(dofs_.pressure_dof(n))) cont += rp[n] * rp[n];
    }
    lin.continuity_norm = std::sqrt(cont);
    lin.phases.assemble = seconds_since(t0);
    return lin;
}

void Discretization::update(State& state, const Eigen::VectorXd& increment, const Linearization& lin, int workers,
                            PhaseTimes* phases) const
{
    const Mesh& mesh = *mesh_;
    const int dim = mesh.dim();
    const auto& order = lin.system.ordering;
    Eigen::VectorXd full = Eigen::VectorXd::Zero(dofs_.num_total());
    for (std::size_t r = 0; r < order.size(); ++r) full[order[r]] = increment[static_cast<Index>(r)];

    for (Index n = 0; n < mesh.num_nodes(); ++n) {
        for (int i = 0; i < dim; ++i) state.velocity[n * dim + i] += full[dofs_.velocity_dof(n, i)];
        state.pressure[n] += full[dofs_.pressure_dof(n)];
    }

    const auto t0 = Clock::now();
    const Index ne = mesh.num_elements();
    if (path() == SolvePath::monolithic) {
        for (Index e = 0; e < ne; ++e) {
            for (int i = 0; i < dim; ++i) state.fine[e * dim + i] += full[dofs_.fine_dof(e, i)];
        }
    } else {
        parallel_for(ne, workers, [&](Index begin, Index end) {
            const int nen = dim + 1;
            Eigen::VectorXd dv(nen * dim), dp(nen);
            for (Index e = begin; e < end; ++e) {
                const auto nodes = mesh.element(e);
                for (int a = 0; a < nen; ++a) {
                    for (int i = 0; i < dim; ++i) dv[a * dim + i] = full[dofs_.velocity_dof(nodes[static_cast<std::size_t>(a)], i)];
                    dp[a] = full[dofs_.pressure_dof(nodes[static_cast<std::size_t>(a)])];
                }
                const Eigen::VectorXd db = recover_fine(lin.condensed[static_cast<std::size_t>(e)], dv, dp);
                for (int i = 0; i < dim; ++i) state.fine[e * dim + i] += db[i];
            }
        });
    }
    if (phases != nullptr) phases->recover += seconds_since(t0);
}

void attach_tractions(const BoundaryConditions& bcs, CaseData& data)
{
    for (const auto& t : bcs.tractions) {
        if (t.value) data.tractions[t.tag] = t.value;
    }
}

Eigen::VectorXd solve_linear(const GlobalSystem& sys, const NewtonConfig& cfg, IterationRecord& rec)
{
    switch (cfg.linear_solver) {
    case LinearSolverKind::dense_direct: {
        Eigen::VectorXd x = linalg::dense_solve(sys.matrix.to_dense(), sys.rhs);
        rec.linear_residual = (sys.matrix * x - sys.rhs).norm() / std::max(sys.rhs.norm(), 1e-300);
        return x;
    }
    case LinearSolverKind::sparse_direct: {
        Eigen::VectorXd x = linalg::sparse_direct_solve(sys.matrix, sys.rhs);
        rec.linear_residual = (sys.matrix * x - sys.rhs).norm() / std::max(sys.rhs.norm(), 1e-300);
        return x;
    }
    case LinearSolverKind::gmres: break;
    }
    auto result = linalg::gmres_solve(sys.matrix, sys.rhs, cfg.krylov);
    rec.linear_iterations = result.iterations;
    rec.linear_cycles = result.cycles;
    rec.max_cycle_iterations = result.max_cycle_iterations;
    rec.linear_residual = result.achieved_residual;
    return std::move(result.x);
}

NewtonResult newton_solve(const Discretization& disc, const CaseData& data, State initial, const NewtonConfig& cfg)
{
    if (!(cfg.atol > 0.0) || !(cfg.rtol > 0.0) || cfg.max_newton < 0 || !(cfg.divergence_factor > 1.0)) {
        throw ConfigError("Newton tolerances must be positive");
    }
    NewtonResult out;
    out.state = std::move(initial);
    apply_dirichlet(disc.mesh(), disc.bcs(), data.time, out.state);
    auto& trace = out.trace;
    double r0 = 0.0;

    for (int k = 0;; ++k) {
        const auto t_iter = Clock::now();
        IterationRecord rec;
        rec.iteration = k;
        Discretization::Linearization lin;
        try {
            lin = disc.linearize(out.state, data, cfg.workers);
        } catch (const Error& e) {
            trace.message = e.what();
            throw NewtonError(std::string("element evaluation failed at iteration ") + std::to_string(k) + ": " +
                                  e.what(),
                              trace);
        }
        rec.residual_norm = lin.system.residual.norm();
        rec.continuity_norm = lin.continuity_norm;
        rec.phases = lin.phases;
        if (k == 0) r0 = rec.residual_norm;

        const bool finite = std::isfinite(rec.residual_norm);
        if (finite && (rec.residual_norm <= cfg.atol || (k > 0 && rec.residual_norm <= cfg.rtol * r0))) {
            rec.seconds = seconds_since(t_iter);
            trace.iterations.push_back(rec);
            trace.converged = true;
            return out;
        }
        if (!finite || (k > 0 && rec.residual_norm > cfg.divergence_factor * r0)) {
            rec.seconds = seconds_since(t_iter);
            trace.iterations.push_back(rec);
            std::ostringstream msg;
            msg << "Newton diverged at iteration " << k << " (residual " << rec.residual_norm << ", initial " << r0
                << ")";
            trace.message = msg.str();
            throw NewtonError(trace.message, trace);
        }
        if (k >= cfg.max_newton) {
            rec.seconds = seconds_since(t_iter);
            trace.iterations.push_back(rec);
            std::ostringstream msg;
            msg << "Newton reached the maximum of " << cfg.max_newton << " iterations (residual " << rec.residual_norm
                << ")";
            trace.message = msg.str();
            throw NewtonError(trace.message, trace);
        }

        Eigen::VectorXd dx;
        const auto t_solve = Clock::now();
        try {
            dx = solve_linear(lin.system, cfg, rec);
        } catch (const Error& e) {
            rec.phases.solve = seconds_since(t_solve);
            rec.seconds = seconds_since(t_iter);
            trace.iterations.push_back(rec);
            trace.message = std::string("linear solve failed at Newton iteration ") + std::to_string(k) + ": " + e.what();
            throw NewtonError(trace.message, trace);
        }
        rec.phases.solve = seconds_since(t_solve);
        disc.update(out.state, dx, lin, cfg.workers, &rec.phases);
        rec.seconds = seconds_since(t_iter);
        trace.iterations.push_back(rec);
        if (cfg.on_iterate) cfg.on_iterate(k + 1, out.state);
    }
}

TransientResult timestep_drive(const Discretization& disc, CaseData data, State initial, double dt, int n_steps,
                               const NewtonConfig& cfg,
                               const std::function<void(int, double, const State&, const ConvergenceTrace&)>& on_step)
{
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    if (n_steps < 0) throw ConfigError("number of time steps must be nonnegative");
    TransientResult out;
    const double t0 = data.time;
    data.dt = dt;
    out.states.push_back(std::move(initial));
    out.times.push_back(t0);
    for (int step = 1; step <= n_steps; ++step) {
        data.time = t0 + step * dt;
        data.previous = &out.states.back();
        NewtonResult r;
        try {
            r = newton_solve(disc, data, out.states.back(), cfg);
        } catch (const NewtonError& e) {
            throw TimeStepError(step, e.what(), e.trace());
        }
        out.traces.push_back(std::move(r.trace));
        out.states.push_back(std::move(r.state));
        out.times.push_back(data.time);
        if (on_step) on_step(step, data.time, out.states.back(), out.traces.back());
    }
    return out;
}

ContinuationResult continue_reynolds(const Discretization& disc, CaseData data, const std::vector<double>& schedule,
                                     State initial, const NewtonConfig& cfg,
                                     const std::function<double(double)>& viscosity_of)
{
    if (schedule.empty()) throw ConfigError("continuation schedule is empty");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0)) throw ConfigError("Reynolds numbers must be positive");
        if (i > 0 && !(schedule[i] > schedule[i - 1])) {
            throw ConfigError("continuation schedule must be strictly increasing");
        }
    }
    ContinuationResult out;
    out.state = std::move(initial);
    for (double re : schedule) {
        data.viscosity = viscosity_of ? viscosity_of(re) : 1.0 / re;
        ContinuationStage stage;
        stage.reynolds = re;
        try {
            auto r = newton_solve(disc, data, out.state, cfg);
            stage.converged = true;
            stage.trace = std::move(r.trace);
            out.state = std::move(r.state);
            out.last_converged = re;
            out.stages.push_back(std::move(stage));
        } catch (const NewtonError& e) {
            stage.trace = e.trace();
            out.stages.push_back(std::move(stage));
            break;
        }
    }
    return out;
}

}  // namespace vms
