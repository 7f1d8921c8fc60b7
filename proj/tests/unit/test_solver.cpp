#include "vms/cases.hpp"
#include "vms/solver.hpp"
#include "vms/verify.hpp"

#include <gtest/gtest.h>

using namespace vms;

namespace {

NewtonConfig direct()
{
    NewtonConfig cfg;
    cfg.linear_solver = LinearSolverKind::sparse_direct;
    return cfg;
}

double max_diff(const State& a, const State& b)
{
    return std::max({(a.velocity - b.velocity).cwiseAbs().maxCoeff(), (a.pressure - b.pressure).cwiseAbs().maxCoeff(),
                     (a.fine - b.fine).cwiseAbs().maxCoeff()});
}

NewtonResult solve_case(const CaseDefinition& c, const NewtonConfig& cfg, SolvePath path = SolvePath::condensed)
{
    Discretization disc(*c.mesh, c.bcs, path);
    return newton_solve(disc, c.case_data(), State::zero(*c.mesh), cfg);
}

}  // namespace

TEST(Newton, RestStateConvergesWithoutIterations)
{
    auto c = case_lid_cavity_3d(2, 100.0);
    c.bcs.dirichlet.back().value = {};
    const auto r = solve_case(c, NewtonConfig{});
    EXPECT_TRUE(r.trace.converged);
    EXPECT_EQ(r.trace.newton_iterations(), 0);
    EXPECT_EQ(r.state.velocity.norm(), 0.0);
}

TEST(Newton, StokesConvergesInOneIteration)
{
    auto c = case_lid_cavity_3d(3, 1.0);
    c.convection = false;
    for (auto kind : {LinearSolverKind::gmres, LinearSolverKind::sparse_direct, LinearSolverKind::dense_direct}) {
        NewtonConfig cfg;
        cfg.linear_solver = kind;
        const auto r = solve_case(c, cfg);
        EXPECT_EQ(r.trace.newton_iterations(), 1) << to_string(kind);
        EXPECT_LE(r.trace.final_residual(), cfg.atol);
    }
}

TEST(Newton, QuadraticTail)
{
    const auto c = case_lid_cavity_3d(4, 100.0);
    const auto r = solve_case(c, NewtonConfig{});
    ASSERT_TRUE(r.trace.converged);
    EXPECT_GE(r.trace.newton_iterations(), 2);
    EXPECT_GE(r.trace.final_log_ratio(), 1.7);
    // each residual falls below a bounded multiple of the previous squared
    const auto& it = r.trace.iterations;
    for (std::size_t k = 2; k < it.size(); ++k) {
        EXPECT_LE(it[k].residual_norm, 100.0 * it[k - 1].residual_norm * it[k - 1].residual_norm);
    }
}

TEST(Newton, ContinuityResidualVanishesAtConvergence)
{
    for (SolvePath path : {SolvePath::condensed, SolvePath::monolithic}) {
        const auto c = case_lid_cavity_3d(3, 100.0);
        NewtonConfig cfg = direct();
        cfg.atol = 1e-11;
        const auto r = solve_case(c, cfg, path);
        EXPECT_LE(r.trace.iterations.back().continuity_norm, 1e-10) << to_string(path);
        EXPECT_GT(r.trace.iterations.front().continuity_norm, 0.0);
    }
}

TEST(Newton, PathsProduceTheSameIterates)
{
    const auto c = case_lid_cavity_3d(3, 100.0);
    NewtonConfig cfg;
    cfg.linear_solver = LinearSolverKind::dense_direct;
    const auto cmp = compare_paths(c, cfg);
    EXPECT_TRUE(cmp.converged);
    EXPECT_GE(cmp.iterations, 3);
    EXPECT_LE(cmp.max_difference, 1e-10);
}

TEST(Newton, WorkerCountDoesNotChangeTheAnswer)
{
    const auto c = case_lid_cavity_3d(4, 100.0);
    NewtonConfig one;
    NewtonConfig many;
    many.workers = 3;
    const auto a = solve_case(c, one);
    const auto b = solve_case(c, many);
    EXPECT_EQ(max_diff(a.state, b.state), 0.0);
    ASSERT_EQ(a.trace.iterations.size(), b.trace.iterations.size());
    for (std::size_t k = 0; k < a.trace.iterations.size(); ++k) {
        EXPECT_EQ(a.trace.iterations[k].residual_norm, b.trace.iterations[k].residual_norm);
    }
}

TEST(Newton, FailureCarriesTheTrace)
{
    const auto c = case_lid_cavity_3d(3, 100.0);
    NewtonConfig cfg;
    cfg.max_newton = 1;
    try {
        (void)solve_case(c, cfg);
        FAIL() << "expected NewtonError";
    } catch (const NewtonError& e) {
        EXPECT_FALSE(e.trace().converged);
        ASSERT_EQ(e.trace().iterations.size(), 2u);
        EXPECT_LT(e.trace().iterations[1].residual_norm, e.trace().iterations[0].residual_norm);
        EXPECT_NE(std::string(e.what()).find("maximum"), std::string::npos);
    }
}

TEST(Newton, LinearSolveFailureBecomesNewtonError)
{
    const auto c = case_lid_cavity_3d(3, 100.0);
    NewtonConfig cfg;
    cfg.krylov.preconditioner = linalg::PreconditionerKind::none;
    cfg.krylov.restart = 2;
    cfg.krylov.max_iters = 1;
    try {
        (void)solve_case(c, cfg);
        FAIL() << "expected NewtonError";
    } catch (const NewtonError& e) {
        EXPECT_NE(std::string(e.what()).find("linear solve failed"), std::string::npos);
        EXPECT_EQ(e.trace().iterations.size(), 1u);
    }
}

TEST(Newton, InvalidConfigurationRejected)
{
    const auto c = case_lid_cavity_3d(2, 100.0);
    NewtonConfig cfg;
    cfg.atol = 0.0;
    EXPECT_THROW((void)solve_case(c, cfg), ConfigError);
    EXPECT_EQ(parse_linear_solver("direct"), LinearSolverKind::sparse_direct);
    EXPECT_EQ(parse_linear_solver("dense"), LinearSolverKind::dense_direct);
    EXPECT_THROW((void)parse_linear_solver("cg"), ConfigError);
}

TEST(Transient, RestStaysAtRest)
{
    auto c = case_lid_cavity_3d(2, 100.0);
    c.bcs.dirichlet.back().value = {};
    Discretization disc(*c.mesh, c.bcs, SolvePath::condensed);
    const auto r = timestep_drive(disc, c.case_data(), State::zero(*c.mesh), 0.1, 3, NewtonConfig{});
    ASSERT_EQ(r.states.size(), 4u);
    EXPECT_DOUBLE_EQ(r.times.back(), 0.3);
    for (const auto& s : r.states) EXPECT_EQ(s.velocity.norm() + s.pressure.norm() + s.fine.norm(), 0.0);
}

TEST(Transient, ApproachesTheSteadyState)
{
    const auto c = case_lid_cavity_3d(3, 10.0);
    const auto steady = solve_case(c, direct());
    Discretization disc(*c.mesh, c.bcs, SolvePath::condensed);
    int calls = 0;
    const auto r = timestep_drive(disc, c.case_data(), State::zero(*c.mesh), 1.0, 20, direct(),
                                  [&](int step, double, const State&, const ConvergenceTrace& t) {
                                      EXPECT_EQ(step, ++calls);
                                      EXPECT_TRUE(t.converged);
                                  });
    EXPECT_EQ(calls, 20);
    EXPECT_LE(max_diff(r.states.back(), steady.state), 1e-4);
    EXPECT_GT(max_diff(r.states[1], steady.state), max_diff(r.states.back(), steady.state));
}

TEST(Transient, HugeStepMatchesSteadySolve)
{
    const auto c = case_lid_cavity_3d(3, 100.0);
    const auto steady = solve_case(c, direct());
    Discretization disc(*c.mesh, c.bcs, SolvePath::condensed);
    const auto r = timestep_drive(disc, c.case_data(), State::zero(*c.mesh), 1e12, 1, direct());
    EXPECT_LE(max_diff(r.states.back(), steady.state), 1e-9);
}

TEST(Transient, FailureReportsTheStep)
{
    const auto c = case_lid_cavity_3d(3, 100.0);
    Discretization disc(*c.mesh, c.bcs, SolvePath::condensed);
    NewtonConfig cfg;
    cfg.max_newton = 0;
    try {
        (void)timestep_drive(disc, c.case_data(), State::zero(*c.mesh), 0.1, 2, cfg);
        FAIL();
    } catch (const TimeStepError& e) {
        EXPECT_EQ(e.step(), 1);
        EXPECT_EQ(e.trace().iterations.size(), 1u);
    }
    EXPECT_THROW((void)timestep_drive(disc, c.case_data(), State::zero(*c.mesh), 0.0, 2, cfg), ConfigError);
}

TEST(Continuation, SingleStageEqualsDirectSolve)
{
    const auto c = case_lid_cavity_3d(3, 100.0);
    Discretization disc(*c.mesh, c.bcs, SolvePath::condensed);
    const auto cont = continue_reynolds(disc, c.case_data(), {100.0}, State::zero(*c.mesh), NewtonConfig{});
    const auto solo = solve_case(c, NewtonConfig{});
    ASSERT_TRUE(cont.completed());
    EXPECT_EQ(*cont.last_converged, 100.0);
    EXPECT_EQ(max_diff(cont.state, solo.state), 0.0);
}

TEST(Continuation, WarmStartSavesIterations)
{
    const auto c = case_lid_cavity_3d(6, 400.0);
    Discretization disc(*c.mesh, c.bcs, SolvePath::condensed);
    const auto cont = continue_reynolds(disc, c.case_data(), {200.0, 400.0}, State::zero(*c.mesh), NewtonConfig{});
    ASSERT_TRUE(cont.completed());
    const auto cold = solve_case(c, NewtonConfig{});
    EXPECT_LT(cont.stages.back().trace.newton_iterations(), cold.trace.newton_iterations());
    EXPECT_LE(max_diff(cont.state, cold.state), 1e-6);
}

TEST(Continuation, StopsAtFirstFailure)
{
    const auto c = case_lid_cavity_3d(3, 100.0);
    Discretization disc(*c.mesh, c.bcs, SolvePath::condensed);
    NewtonConfig cfg;
    cfg.max_newton = 4;
    auto data = c.case_data();
    // the second stage cannot converge with a single allowed iteration
    int stage = 0;
    const auto cont = continue_reynolds(disc, data, {50.0, 100.0, 200.0}, State::zero(*c.mesh), cfg,
                                        [&](double re) { return ++stage == 2 ? 1e-9 : 1.0 / re; });
    EXPECT_FALSE(cont.completed());
    ASSERT_EQ(cont.stages.size(), 2u);
    EXPECT_TRUE(cont.stages[0].converged);
    EXPECT_EQ(*cont.last_converged, 50.0);
}

TEST(Continuation, ScheduleValidation)
{
    const auto c = case_lid_cavity_3d(2, 100.0);
    Discretization disc(*c.mesh, c.bcs, SolvePath::condensed);
    const auto zero = State::zero(*c.mesh);
    EXPECT_THROW((void)continue_reynolds(disc, c.case_data(), {}, zero, NewtonConfig{}), ConfigError);
    EXPECT_THROW((void)continue_reynolds(disc, c.case_data(), {100.0, 100.0}, zero, NewtonConfig{}), ConfigError);
    EXPECT_THROW((void)continue_reynolds(disc, c.case_data(), {-1.0, 100.0}, zero, NewtonConfig{}), ConfigError);
}
