#include "vms/assembly.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace vms;

namespace {

BoundaryConditions walls(const Mesh& m)
{
    BoundaryConditions bcs;
    for (const auto& t : m.tag_names()) bcs.dirichlet.push_back({t, {}});
    bcs.pressure_pin = PressurePin{"", Vec3::Zero(), 0.0};
    return bcs;
}

std::vector<ElementContribution> random_contributions(const Mesh& m, const DofMap& dofs, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<ElementContribution> out;
    for (Index e = 0; e < m.num_elements(); ++e) {
        const auto n = static_cast<Index>(dofs.element_dofs(m, e).size());
        out.push_back({Eigen::MatrixXd::NullaryExpr(n, n, [&] { return u(rng); }),
                       Eigen::VectorXd::NullaryExpr(n, [&] { return u(rng); })});
    }
    return out;
}

}  // namespace

TEST(Dofs, CountFormulas)
{
    for (int n : {1, 2, 5, 8}) {
        const Mesh m = generate_box_mesh(3, {n, n, n});
        const auto c = dof_counts(m);
        const Index nodes = static_cast<Index>(n + 1) * (n + 1) * (n + 1);
        EXPECT_EQ(c.coarse, 4 * nodes);
        EXPECT_EQ(c.fine, 3 * 6 * static_cast<Index>(n) * n * n);
        EXPECT_EQ(c.total(), c.coarse + c.fine);
    }
    const Mesh m2 = generate_box_mesh(2, {4, 4, 1});
    EXPECT_EQ(dof_counts(m2).coarse, 3 * 25);
    EXPECT_EQ(dof_counts(m2).fine, 2 * 32);
}

TEST(Dofs, FineFractionApproachesEighteenOverTwentyTwo)
{
    const Mesh m = generate_box_mesh(3, {8, 8, 8});
    EXPECT_GE(dof_counts(m).fine_fraction(), 0.75);
    const Mesh big = generate_box_mesh(3, {16, 16, 16});
    EXPECT_GT(dof_counts(big).fine_fraction(), dof_counts(m).fine_fraction());
    EXPECT_LT(dof_counts(big).fine_fraction(), 18.0 / 22.0);
}

TEST(Dofs, InterleavedNumbering)
{
    const Mesh m = generate_box_mesh(3, {2, 2, 2});
    const auto mono = build_dofmap(m, walls(m), SolvePath::monolithic);
    const auto cond = build_dofmap(m, walls(m), SolvePath::condensed);
    EXPECT_EQ(mono.velocity_dof(5, 2), 22);
    EXPECT_EQ(mono.pressure_dof(5), 23);
    EXPECT_EQ(mono.fine_dof(0, 0), mono.num_coarse());
    EXPECT_EQ(mono.num_total(), dof_counts(m).total());
    EXPECT_EQ(cond.num_total(), dof_counts(m).coarse);
    EXPECT_EQ(mono.element_dofs(m, 3).size(), 19u);
    EXPECT_EQ(cond.element_dofs(m, 3).size(), 16u);
    // every interior node and every fine dof is free
    const auto boundary = m.boundary_node_mask();
    Index expected_free = -1;  // the pinned pressure
    for (Index n = 0; n < m.num_nodes(); ++n) {
        expected_free += boundary[static_cast<std::size_t>(n)] ? 1 : 4;
    }
    EXPECT_EQ(cond.num_free(), expected_free);
    EXPECT_EQ(mono.num_free(), cond.num_free() + dof_counts(m).fine);
}

TEST(Dofs, EnclosedFlowNeedsPin)
{
    const Mesh m = generate_box_mesh(2, {2, 2, 1});
    auto bcs = walls(m);
    bcs.pressure_pin.reset();
    EXPECT_THROW((void)build_dofmap(m, bcs, SolvePath::condensed), ConfigError);
    bcs.dirichlet.pop_back();
    EXPECT_NO_THROW((void)build_dofmap(m, bcs, SolvePath::condensed));
}

TEST(Dofs, UnknownTagsRejected)
{
    const Mesh m = generate_box_mesh(2, {2, 2, 1});
    auto bcs = walls(m);
    bcs.dirichlet.push_back({"lid", {}});
    EXPECT_THROW((void)build_dofmap(m, bcs, SolvePath::condensed), ConfigError);
    bcs = walls(m);
    bcs.tractions.push_back({"outlet", {}});
    EXPECT_THROW((void)build_dofmap(m, bcs, SolvePath::condensed), ConfigError);
    bcs = walls(m);
    bcs.pressure_pin = PressurePin{"nowhere", Vec3::Zero(), 0.0};
    EXPECT_THROW((void)build_dofmap(m, bcs, SolvePath::condensed), ConfigError);
}

TEST(Dofs, LaterDirichletConditionWins)
{
    const Mesh m = generate_box_mesh(2, {2, 2, 1});
    BoundaryConditions bcs;
    bcs.dirichlet.push_back({"ymax", [](const Vec3&, double) { return Vec3(1.0, 0.0, 0.0); }});
    bcs.dirichlet.push_back({"xmax", {}});
    bcs.pressure_pin = PressurePin{"", Vec3::Zero(), 0.25};
    const auto dofs = build_dofmap(m, bcs, SolvePath::condensed);
    State s = State::zero(m);
    apply_dirichlet(m, bcs, 0.0, s);
    const Index corner = resolve_pin_node(m, PressurePin{"", Vec3(1.0, 1.0, 0.0), 0.0});
    const Index lid_mid = resolve_pin_node(m, PressurePin{"", Vec3(0.5, 1.0, 0.0), 0.0});
    EXPECT_EQ(s.velocity[corner * 2], 0.0);
    EXPECT_EQ(s.velocity[lid_mid * 2], 1.0);
    EXPECT_EQ(s.pressure[resolve_pin_node(m, *bcs.pressure_pin)], 0.25);
    for (const auto& c : dofs.constraints()) {
        if (c.node == corner && c.component < 2) { EXPECT_EQ(c.source, 1); }
        if (c.component == 2) { EXPECT_EQ(c.source, -1); }
    }
    EXPECT_TRUE(dofs.constrained(dofs.pressure_dof(*dofs.pinned_pressure_node())));
}

TEST(Dofs, PinByTagUsesLowestNode)
{
    const Mesh m = generate_box_mesh(2, {3, 3, 1});
    EXPECT_EQ(resolve_pin_node(m, PressurePin{"xmax", Vec3::Zero(), 0.0}), m.nodes_with_tag("xmax").front());
    const Index n = resolve_pin_node(m, PressurePin{"", Vec3(0.34, 0.68, 0.0), 0.0});
    EXPECT_NEAR(m.point(n)[0], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(m.point(n)[1], 2.0 / 3.0, 1e-15);
}

TEST(Assembly, MatchesDenseScatter)
{
    for (SolvePath path : {SolvePath::condensed, SolvePath::monolithic}) {
        const Mesh m = generate_box_mesh(3, {2, 1, 2});
        auto bcs = walls(m);
        bcs.dirichlet.erase(bcs.dirichlet.begin());
        const auto dofs = build_dofmap(m, bcs, path);
        const auto elems = random_contributions(m, dofs, 17);

        Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(dofs.num_total(), dofs.num_total());
        Eigen::VectorXd r = Eigen::VectorXd::Zero(dofs.num_total());
        for (Index e = 0; e < m.num_elements(); ++e) {
            const auto ed = dofs.element_dofs(m, e);
            for (std::size_t i = 0; i < ed.size(); ++i) {
                r[ed[i]] += elems[static_cast<std::size_t>(e)].residual[static_cast<Index>(i)];
                for (std::size_t j = 0; j < ed.size(); ++j) {
                    dense(ed[i], ed[j]) += elems[static_cast<std::size_t>(e)].matrix(static_cast<Index>(i), static_cast<Index>(j));
                }
            }
        }

        Eigen::VectorXd prescribed = Eigen::VectorXd::Zero(dofs.num_total());
        for (const auto& c : dofs.constraints()) prescribed[c.dof] = 0.1 * static_cast<double>(c.dof % 7) - 0.3;

        const Assembler asmb(m, dofs);
        const auto sys = asmb.assemble(elems, &prescribed);
        const auto& free = dofs.free_dofs();
        ASSERT_EQ(sys.matrix.rows, dofs.num_free());
        const Eigen::MatrixXd a = sys.matrix.to_dense();
        double err = 0.0;
        for (std::size_t i = 0; i < free.size(); ++i) {
            double lift = 0.0;
            for (const auto& c : dofs.constraints()) lift += dense(free[i], c.dof) * prescribed[c.dof];
            err = std::max(err, std::abs(sys.residual[static_cast<Index>(i)] - r[free[i]]));
            err = std::max(err, std::abs(sys.rhs[static_cast<Index>(i)] - (-r[free[i]] - lift)));
            for (std::size_t j = 0; j < free.size(); ++j) {
                err = std::max(err, std::abs(a(static_cast<Index>(i), static_cast<Index>(j)) - dense(free[i], free[j])));
            }
        }
        EXPECT_LE(err, 1e-13) << to_string(path);

        const auto full = asmb.assemble_residual(elems);
        for (const auto& c : dofs.constraints()) EXPECT_EQ(full[c.dof], 0.0);
        for (Index d : free) EXPECT_NEAR(full[d], r[d], 1e-14);
    }
}

TEST(Assembly, PatternCoversElementCouplings)
{
    const Mesh m = generate_box_mesh(2, {3, 2, 1});
    const auto dofs = build_dofmap(m, walls(m), SolvePath::monolithic);
    const Assembler asmb(m, dofs);
    const auto& p = asmb.pattern();
    for (Index e = 0; e < m.num_elements(); ++e) {
        for (Index r : dofs.element_dofs(m, e)) {
            for (Index c : dofs.element_dofs(m, e)) {
                if (dofs.constrained(r) || dofs.constrained(c)) continue;
                EXPECT_GE(p.find(dofs.free_index(r), dofs.free_index(c)), 0);
            }
        }
    }
    // fine dofs of different elements never couple
    EXPECT_LT(p.find(dofs.free_index(dofs.fine_dof(0, 0)), dofs.free_index(dofs.fine_dof(1, 0))), 0);
}

TEST(Assembly, WrongContributionCountThrows)
{
    const Mesh m = generate_box_mesh(2, {1, 1, 1});
    const auto dofs = build_dofmap(m, walls(m), SolvePath::condensed);
    std::vector<ElementContribution> one(1, {Eigen::MatrixXd::Zero(9, 9), Eigen::VectorXd::Zero(9)});
    EXPECT_THROW((void)assemble(m, dofs, one), Error);
}

TEST(Assembly, PathNames)
{
    EXPECT_EQ(parse_solve_path("monolithic"), SolvePath::monolithic);
    EXPECT_EQ(to_string(parse_solve_path("condensed")), "condensed");
    EXPECT_THROW((void)parse_solve_path("schur"), ConfigError);
}
