#include "vms/basis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace vms;

namespace {

double factorial(int n)
{
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// integral of xi0^a xi1^b xi2^c over the reference simplex
double monomial_integral(int dim, const std::array<int, 3>& e)
{
    double num = 1.0;
    int sum = 0;
    for (int k = 0; k < dim; ++k) {
        num *= factorial(e[static_cast<std::size_t>(k)]);
        sum += e[static_cast<std::size_t>(k)];
    }
    return num / factorial(sum + dim);
}

Eigen::VectorXd random_point(int dim, std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd xi(dim);
    do {
        for (int k = 0; k < dim; ++k) xi[k] = u(rng);
    } while (xi.sum() > 1.0);
    return xi;
}

}  // namespace

TEST(Basis, PartitionOfUnityAndGradients)
{
    std::mt19937 rng(7);
    for (int dim = 2; dim <= 3; ++dim) {
        for (int s = 0; s < 50; ++s) {
            const auto xi = random_point(dim, rng);
            const auto b = eval_basis(dim, xi);
            EXPECT_NEAR(b.N.sum(), 1.0, 1e-15);
            for (int k = 0; k < dim; ++k) EXPECT_NEAR(b.DN.col(k).sum(), 0.0, 1e-15);
            // linear shape functions reproduce the reference coordinates
            for (int k = 0; k < dim; ++k) EXPECT_NEAR(b.N[k + 1], xi[k], 1e-15);
        }
    }
}

TEST(Basis, BubbleIsOneAtCentroid)
{
    EXPECT_NEAR(eval_basis(2, Eigen::Vector2d::Constant(1.0 / 3.0)).bubble, 1.0, 1e-14);
    EXPECT_NEAR(eval_basis(3, Eigen::Vector3d::Constant(0.25)).bubble, 1.0, 1e-14);
    EXPECT_NEAR(eval_basis(2, Eigen::Vector2d::Constant(1.0 / 3.0)).bubble_grad.norm(), 0.0, 1e-14);
    EXPECT_NEAR(eval_basis(3, Eigen::Vector3d::Constant(0.25)).bubble_grad.norm(), 0.0, 1e-14);
}

TEST(Basis, BubbleVanishesOnEveryFace)
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int dim = 2; dim <= 3; ++dim) {
        const int nen = dim + 1;
        double worst = 0.0;
        for (int face = 0; face < nen; ++face) {
            for (int s = 0; s < 1000; ++s) {
                // random barycentric point with lambda_face = 0
                Eigen::VectorXd lam(nen);
                for (int a = 0; a < nen; ++a) lam[a] = a == face ? 0.0 : -std::log(u(rng) + 1e-300);
                lam /= lam.sum();
                lam[face] = 0.0;
                const Eigen::VectorXd xi = lam.tail(dim);
                worst = std::max(worst, std::abs(eval_basis(dim, xi).bubble));
            }
        }
        EXPECT_LE(worst, 1e-14) << dim << "D";
    }
}

TEST(Basis, ReferenceGradientsMatchFiniteDifferences)
{
    std::mt19937 rng(3);
    const double h = 1e-6;
    for (int dim = 2; dim <= 3; ++dim) {
        for (int s = 0; s < 20; ++s) {
            const Eigen::VectorXd xi = random_point(dim, rng) * 0.9;
            const auto b = eval_basis(dim, xi);
            for (int k = 0; k < dim; ++k) {
                Eigen::VectorXd p = xi, m = xi;
                p[k] += h;
                m[k] -= h;
                const auto bp = eval_basis(dim, p), bm = eval_basis(dim, m);
                EXPECT_NEAR((bp.bubble - bm.bubble) / (2 * h), b.bubble_grad[k], 1e-8);
                for (int a = 0; a <= dim; ++a) EXPECT_NEAR((bp.N[a] - bm.N[a]) / (2 * h), b.DN(a, k), 1e-9);
            }
        }
    }
}

TEST(Quadrature, WeightsSumToReferenceVolume)
{
    for (int dim = 1; dim <= 3; ++dim) {
        for (int deg = 0; deg <= kMaxQuadratureDegree; ++deg) {
            const auto q = quadrature(dim, deg);
            EXPECT_NEAR(q.weights.sum(), 1.0 / factorial(dim), 1e-14) << dim << " " << deg;
            for (Index i = 0; i < q.size(); ++i) {
                EXPECT_GT(q.weights[i], 0.0);
                EXPECT_GE(q.points.row(i).minCoeff(), 0.0);
                EXPECT_LE(q.points.row(i).sum(), 1.0 + 1e-14);
            }
        }
    }
}

TEST(Quadrature, ExactForMonomialsUpToDegree)
{
    for (int dim = 1; dim <= 3; ++dim) {
        for (int deg = 1; deg <= kMaxQuadratureDegree; ++deg) {
            const auto q = quadrature(dim, deg);
            for (int a = 0; a <= deg; ++a) {
                for (int b = 0; a + b <= deg; ++b) {
                    for (int c = 0; a + b + c <= deg; ++c) {
                        if ((dim < 2 && b > 0) || (dim < 3 && c > 0)) continue;
                        const std::array<int, 3> e{a, b, c};
                        double sum = 0.0;
                        for (Index i = 0; i < q.size(); ++i) {
                            double m = q.weights[i];
                            for (int k = 0; k < dim; ++k) m *= std::pow(q.points(i, k), e[static_cast<std::size_t>(k)]);
                            sum += m;
                        }
                        const double exact = monomial_integral(dim, e);
                        EXPECT_NEAR(sum, exact, 1e-14 + 1e-12 * exact)
                            << "dim " << dim << " degree " << deg << " monomial " << a << b << c;
                    }
                }
            }
        }
    }
}

TEST(Quadrature, DegreeAboveMaximumThrows)
{
    EXPECT_THROW((void)quadrature(3, kMaxQuadratureDegree + 1), Error);
    EXPECT_THROW((void)quadrature(4, 2), Error);
}

TEST(Quadrature, GaussLegendreOnUnitInterval)
{
    std::vector<double> x, w;
    gauss_legendre(5, x, w);
    ASSERT_EQ(x.size(), 5u);
    double s = 0.0, m9 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += w[i];
        m9 += w[i] * std::pow(x[i], 9);
    }
    EXPECT_NEAR(s, 1.0, 1e-15);
    EXPECT_NEAR(m9, 0.1, 1e-15);
}

TEST(Kinematics, AffineMapAndPhysicalGradients)
{
    const Mesh m(3, {1, 1, 1, 3, 1, 1, 1, 2, 1, 1, 1, 1.5}, {0, 1, 2, 3}, {});
    const auto b = eval_basis(3, Eigen::Vector3d(0.2, 0.3, 0.1));
    const auto k = kinematics(m, 0, b.DN);
    EXPECT_NEAR(k.detJ, 2.0 * 1.0 * 0.5, 1e-15);
    EXPECT_NEAR(k.detJ / 6.0, m.signed_volume(0), 1e-15);
    // grad of x, y, z reproduced from nodal coordinates
    for (int i = 0; i < 3; ++i) {
        Eigen::Vector3d g = Eigen::Vector3d::Zero();
        for (int a = 0; a < 4; ++a) g += m.point(m.element(0)[static_cast<std::size_t>(a)])[i] * k.grads_phys.row(a).transpose();
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(g[j], i == j ? 1.0 : 0.0, 1e-14);
    }
}

TEST(Kinematics, DegenerateElementThrows)
{
    const Mesh flat(3, {0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0}, {0, 1, 2, 3}, {});
    const auto b = eval_basis(3, Eigen::Vector3d::Constant(0.25));
    EXPECT_THROW((void)kinematics(flat, 0, b.DN), DegenerateElement);
    const Mesh inverted(2, {0, 0, 0, 1, 1, 0}, {0, 1, 2}, {});
    try {
        (void)kinematics(inverted, 0, eval_basis(2, Eigen::Vector2d::Constant(1.0 / 3.0)).DN);
        FAIL();
    } catch (const DegenerateElement& e) {
        EXPECT_EQ(e.element(), 0);
    }
}

TEST(Kinematics, TabulatedBasisMatchesRule)
{
    const auto t = TabulatedBasis::build(3, 4);
    ASSERT_EQ(static_cast<Index>(t.values.size()), t.rule.size());
    for (Index i = 0; i < t.rule.size(); ++i) {
        const auto b = eval_basis(3, t.rule.points.row(i).transpose());
        EXPECT_DOUBLE_EQ(b.bubble, t.values[static_cast<std::size_t>(i)].bubble);
    }
}
