#include "vms/kernel.hpp"
#include "vms/verify.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

using namespace vms;

namespace {

struct ResidualOracleCase {
    int dim;
    bool convection;
    std::vector<std::vector<double>> X;
    std::vector<std::vector<double>> U;
    std::vector<std::vector<double>> Up;
    std::vector<double> P;
    double nu;
    double dt;
    std::vector<double> b0;
    std::vector<std::vector<double>> b1;
    bool has_traction;
    std::vector<double> h;
    std::vector<double> Rc;
    std::vector<double> Rp;
    std::vector<double> Rf;
};

#include "residual_oracle.inc"

struct OracleSetup {
    Mesh mesh;
    State previous;
    ElementState state;
    CaseData data;
};

OracleSetup setup(const ResidualOracleCase& k)
{
    const int dim = k.dim;
    const int nen = dim + 1;
    std::vector<double> coords;
    for (const auto& row : k.X) coords.insert(coords.end(), row.begin(), row.end());
    std::vector<Index> conn(static_cast<std::size_t>(nen));
    for (int a = 0; a < nen; ++a) conn[static_cast<std::size_t>(a)] = a;
    std::vector<BoundaryFace> faces;
    if (k.has_traction) {
        BoundaryFace f;
        for (int a = 1; a < nen; ++a) f.nodes.push_back(a);
        f.tag = "loaded";
        faces.push_back(f);
    }
    OracleSetup s{Mesh(dim, coords, conn, faces), {}, {}, {}};

    s.state.velocity.resize(nen, dim);
    s.state.pressure.resize(nen);
    s.state.fine.resize(dim);
    s.previous = State::zero(s.mesh);
    for (int a = 0; a < nen; ++a) {
        s.state.pressure[a] = k.P[static_cast<std::size_t>(a)];
        for (int i = 0; i < dim; ++i) {
            s.state.velocity(a, i) = k.U[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
            s.previous.velocity[a * dim + i] = k.Up[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
        }
    }
    for (int i = 0; i < dim; ++i) {
        s.state.fine[i] = k.U[static_cast<std::size_t>(nen)][static_cast<std::size_t>(i)];
        s.previous.fine[i] = k.Up[static_cast<std::size_t>(nen)][static_cast<std::size_t>(i)];
    }

    s.data.viscosity = k.nu;
    s.data.convection = k.convection;
    if (k.dt > 0.0) s.data.dt = k.dt;
    const auto b0 = k.b0;
    const auto b1 = k.b1;
    s.data.body_force = [b0, b1, dim](const Vec3& x, double) {
        Vec3 f = Vec3::Zero();
        for (int i = 0; i < dim; ++i) {
            f[i] = b0[static_cast<std::size_t>(i)];
            for (int j = 0; j < dim; ++j) f[i] += b1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * x[j];
        }
        return f;
    };
    if (k.has_traction) {
        const auto h = k.h;
        s.data.tractions["loaded"] = [h, dim](const Vec3&, double) {
            Vec3 t = Vec3::Zero();
            for (int i = 0; i < dim; ++i) t[i] = h[static_cast<std::size_t>(i)];
            return t;
        };
    }
    return s;
}

void expect_vector(const Eigen::VectorXd& got, const std::vector<double>& want, double tol, const char* what)
{
    ASSERT_EQ(got.size(), static_cast<Eigen::Index>(want.size())) << what;
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_NEAR(got[static_cast<Eigen::Index>(i)], want[i], tol * (1.0 + std::abs(want[i]))) << what << "[" << i << "]";
    }
}

}  // namespace

TEST(Kernel, ResidualMatchesExactIntegration)
{
    ASSERT_EQ(kResidualOracle.size(), 5u);
    for (std::size_t c = 0; c < kResidualOracle.size(); ++c) {
        SCOPED_TRACE("oracle case " + std::to_string(c));
        const auto& k = kResidualOracle[c];
        auto s = setup(k);
        s.data.previous = &s.previous;
        const auto basis = TabulatedBasis::build(k.dim, 12);
        const auto r = element_residual(s.mesh, 0, basis, s.state, s.data);
        expect_vector(r.Rc, k.Rc, 1e-12, "Rc");
        expect_vector(r.Rp, k.Rp, 1e-12, "Rp");
        expect_vector(r.Rf, k.Rf, 1e-12, "Rf");

        const auto sys = element_tangent(s.mesh, 0, basis, s.state, s.data);
        EXPECT_LE((sys.Rc - r.Rc).norm(), 1e-14);
        EXPECT_LE((sys.Rp - r.Rp).norm(), 1e-14);
        EXPECT_LE((sys.Rf - r.Rf).norm(), 1e-14);
    }
}

TEST(Kernel, ZeroStateWithoutForcingHasZeroResidual)
{
    for (int dim = 2; dim <= 3; ++dim) {
        const Mesh m = generate_box_mesh(dim, {2, 2, 2});
        const auto basis = TabulatedBasis::build(dim, default_quadrature_degree(dim));
        CaseData data;
        data.viscosity = 0.01;
        const State zero = State::zero(m);
        for (Index e = 0; e < m.num_elements(); ++e) {
            const auto r = element_residual(m, e, basis, gather(m, e, zero), data);
            EXPECT_EQ(r.Rc.norm() + r.Rp.norm() + r.Rf.norm(), 0.0);
        }
    }
}

TEST(Kernel, ConstantPressureLoadsOnlyTheBoundary)
{
    // interior coarse rows of a constant pressure field cancel after assembly
    const Mesh m = generate_box_mesh(2, {1, 1, 1});
    const auto basis = TabulatedBasis::build(2, 4);
    CaseData data;
    State s = State::zero(m);
    s.pressure.setConstant(1.0);
    Eigen::Vector2d total = Eigen::Vector2d::Zero();
    for (Index e = 0; e < m.num_elements(); ++e) {
        const auto r = element_residual(m, e, basis, gather(m, e, s), data);
        for (int a = 0; a < 3; ++a) total += r.Rc.segment<2>(2 * a);
        // bubble has zero mean gradient, so a constant pressure does not load it
        EXPECT_NEAR(r.Rf.norm(), 0.0, 1e-14);
    }
    EXPECT_NEAR(total.norm(), 0.0, 1e-14);
}

TEST(Kernel, TangentMatchesCentralDifferences)
{
    for (int dim = 2; dim <= 3; ++dim) {
        const Mesh m = generate_box_mesh(dim, {2, 2, 2});
        const auto basis = TabulatedBasis::build(dim, default_quadrature_degree(dim));
        State prev = State::zero(m);
        prev.velocity.setConstant(0.3);
        for (bool transient : {false, true}) {
            CaseData data;
            data.viscosity = 0.05;
            data.body_force = [](const Vec3& x, double) { return Vec3(x[1], -x[0], x[2]); };
            if (transient) {
                data.dt = 0.1;
                data.previous = &prev;
            }
            const auto check = check_tangent(m, basis, data, 20, 42u + static_cast<unsigned>(dim));
            EXPECT_EQ(check.states, 20);
            EXPECT_LE(check.max_relative_error, 1e-6) << dim << "D worst block " << check.worst_block;
        }
    }
}

TEST(Kernel, StokesTangentIsStateIndependent)
{
    const Mesh m = generate_box_mesh(3, {1, 1, 1});
    const auto basis = TabulatedBasis::build(3, 4);
    CaseData data;
    data.convection = false;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ElementState a{Eigen::MatrixXd::Zero(4, 3), Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(3)};
    ElementState b{Eigen::MatrixXd::NullaryExpr(4, 3, [&] { return u(rng); }),
                   Eigen::VectorXd::NullaryExpr(4, [&] { return u(rng); }),
                   Eigen::VectorXd::NullaryExpr(3, [&] { return u(rng); })};
    const auto ta = element_tangent(m, 0, basis, a, data);
    const auto tb = element_tangent(m, 0, basis, b, data);
    EXPECT_LE((ta.dRc_dv - tb.dRc_dv).norm(), 1e-14);
    EXPECT_LE((ta.dRf_db - tb.dRf_db).norm(), 1e-14);
    // the continuity and pressure blocks are transposes of each other
    EXPECT_LE((ta.dRp_dv - ta.dRc_dp.transpose()).norm(), 1e-14);
    EXPECT_LE((ta.dRp_db - ta.dRf_dp.transpose()).norm(), 1e-14);
    EXPECT_EQ(ta.dRp_dp.norm(), 0.0);
}

TEST(Kernel, FineBlockInversion)
{
    Eigen::Matrix2d good;
    good << 4.0, 1.0, -1.0, 3.0;
    double cond = 0.0;
    const auto inv = fine_block_invert(good, &cond);
    EXPECT_LE((inv * good - Eigen::Matrix2d::Identity()).norm(), 1e-14);
    EXPECT_GT(cond, 1.0);

    Eigen::Matrix2d singular;
    singular << 1.0, 2.0, 2.0, 4.0;
    EXPECT_THROW((void)fine_block_invert(singular), SingularFineBlock);
    Eigen::Matrix2d nearly;
    nearly << 1.0, 0.0, 0.0, 1e-13;
    try {
        (void)fine_block_invert(nearly);
        FAIL();
    } catch (const SingularFineBlock& e) {
        EXPECT_GT(e.condition(), kMaxFineCondition);
    }
}
