#pragma once

#include "vms/assembly.hpp"
#include "vms/condense.hpp"

#include <functional>
#include <optional>

namespace vms {

enum class LinearSolverKind { gmres, dense_direct, sparse_direct };

[[nodiscard]] LinearSolverKind parse_linear_solver(const std::string& name);
[[nodiscard]] std::string to_string(LinearSolverKind kind);

struct NewtonConfig {
    double atol = 1e-10;
    double rtol = 1e-8;
    int max_newton = 25;
    double divergence_factor = 1e4;
    LinearSolverKind linear_solver = LinearSolverKind::gmres;
    linalg::KrylovConfig krylov;
    int workers = 1;
    /// Called with the iteration count after every update.
    std::function<void(int, const State&)> on_iterate;
};

struct PhaseTimes {
    double kernel = 0.0;
    double condense = 0.0;
    double assemble = 0.0;
    double solve = 0.0;
    double recover = 0.0;

    PhaseTimes& operator+=(const PhaseTimes& o)
    {
        kernel += o.kernel;
        condense += o.condense;
        assemble += o.assemble;
        solve += o.solve;
        recover += o.recover;
        return *this;
    }
    [[nodiscard]] double total() const noexcept { return kernel + condense + assemble + solve + recover; }
};

struct IterationRecord {
    int iteration = 0;
    double residual_norm = 0.0;    // ||(R1, R2)|| (condensed) or ||(Rc, Rp, Rf)||
    double continuity_norm = 0.0;  // ||Rp|| over free pressure dofs
    int linear_iterations = 0;
    int linear_cycles = 0;
    int max_cycle_iterations = 0;
    double linear_residual = 0.0;
    double seconds = 0.0;
    PhaseTimes phases;
};

struct ConvergenceTrace {
    std::vector<IterationRecord> iterations;
    bool converged = false;
    std::string message;

    /// Newton updates performed.
    [[nodiscard]] int newton_iterations() const noexcept
    {
        return iterations.empty() ? 0 : static_cast<int>(iterations.size()) - 1;
    }
    [[nodiscard]] double final_residual() const { return iterations.empty() ? 0.0 : iterations.back().residual_norm; }
    /// log||R_last|| / log||R_last-1||; NaN with fewer than two records.
    [[nodiscard]] double final_log_ratio() const;
    /// ||R_last|| / ||R_last-1||^2
    [[nodiscard]] double final_quadratic_constant() const;
};

class NewtonError : public Error {
public:
    NewtonError(const std::string& what, ConvergenceTrace trace) : Error(what), trace_(std::move(trace)) {}
    [[nodiscard]] const ConvergenceTrace& trace() const noexcept { return trace_; }

private:
    ConvergenceTrace trace_;
};

/// Mesh, boundary conditions, dof numbering, sparsity and basis tables for
/// one solve path. Holds a reference to the mesh.
class Discretization {
public:
    Discretization(const Mesh& mesh, BoundaryConditions bcs, SolvePath path, int quadrature_degree = 0);

    [[nodiscard]] const Mesh& mesh() const noexcept { return *mesh_; }
    [[nodiscard]] const BoundaryConditions& bcs() const noexcept { return bcs_; }
    [[nodiscard]] const DofMap& dofs() const noexcept { return dofs_; }
    [[nodiscard]] const Assembler& assembler() const noexcept { return *assembler_; }
    [[nodiscard]] const TabulatedBasis& basis() const noexcept { return basis_; }
    [[nodiscard]] SolvePath path() const noexcept { return dofs_.path(); }

    struct Linearization {
        GlobalSystem system;
        std::vector<CondensedElement> condensed;  // condensed path only
        double continuity_norm = 0.0;
        PhaseTimes phases;
    };

    /// Element kernels, condensation (condensed path) and assembly at `state`.
    [[nodiscard]] Linearization linearize(const State& state, const CaseData& data, int workers) const;

    /// Applies a solved increment (free-dof numbering) and, on the condensed
    /// path, the recovered fine increments.
    void update(State& state, const Eigen::VectorXd& increment, const Linearization& lin, int workers,
                PhaseTimes* phases = nullptr) const;

private:
    const Mesh* mesh_;
    BoundaryConditions bcs_;
    DofMap dofs_;
    std::unique_ptr<Assembler> assembler_;
    TabulatedBasis basis_;
};

/// Adds each boundary condition's traction to `data.tractions`.
void attach_tractions(const BoundaryConditions& bcs, CaseData& data);

struct NewtonResult {
    State state;
    ConvergenceTrace trace;
};

/// Full-step Newton on the discretization's path. Imposes Dirichlet values at
/// data.time on the initial state. Throws NewtonError.
[[nodiscard]] NewtonResult newton_solve(const Discretization& disc, const CaseData& data, State initial,
                                        const NewtonConfig& cfg);

/// Solves one linear system per the configured solver; returns the solution
/// and fills the record's linear statistics.
[[nodiscard]] Eigen::VectorXd solve_linear(const GlobalSystem& sys, const NewtonConfig& cfg, IterationRecord& rec);

class TimeStepError : public Error {
public:
    TimeStepError(int step, const std::string& what, ConvergenceTrace trace)
        : Error("time step " + std::to_string(step) + ": " + what), step_(step), trace_(std::move(trace)) {}
    [[nodiscard]] int step() const noexcept { return step_; }
    [[nodiscard]] const ConvergenceTrace& trace() const noexcept { return trace_; }

private:
    int step_;
    ConvergenceTrace trace_;
};

struct TransientResult {
    std::vector<State> states;  // states[0] is the initial state
    std::vector<ConvergenceTrace> traces;
    std::vector<double> times;
};

/// Backward Euler from data.time. `on_step(step, time, state, trace)` runs
/// after each converged step.
[[nodiscard]] TransientResult timestep_drive(
    const Discretization& disc, CaseData data, State initial, double dt, int n_steps, const NewtonConfig& cfg,
    const std::function<void(int, double, const State&, const ConvergenceTrace&)>& on_step = {});

struct ContinuationStage {
    double reynolds = 0.0;
    bool converged = false;
    ConvergenceTrace trace;
};

struct ContinuationResult {
    std::vector<ContinuationStage> stages;
    std::optional<double> last_converged;
    State state;  // last converged state
    [[nodiscard]] bool completed() const noexcept
    {
        return !stages.empty() && stages.back().converged;
    }
};

/// Solves each Reynolds number in turn, warm-starting from the last converged
/// state; viscosity = viscosity_of(Re), 1/Re by default. Stops at the first
/// failure. Throws ConfigError unless the schedule is strictly increasing.
[[nodiscard]] ContinuationResult continue_reynolds(const Discretization& disc, CaseData data,
                                                   const std::vector<double>& schedule, State initial,
                                                   const NewtonConfig& cfg,
                                                   const std::function<double(double)>& viscosity_of = {});

}  // namespace vms
