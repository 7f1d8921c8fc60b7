#include "vms/basis.hpp"

#include <cmath>
#include <numbers>

namespace vms {

Eigen::VectorXd barycentric(const Eigen::VectorXd& xi)
{
    const auto dim = xi.size();
    Eigen::VectorXd lambda(dim + 1);
    lambda[0] = 1.0 - xi.sum();
    lambda.tail(dim) = xi;
    return lambda;
}

BasisValues eval_basis(int dim, const Eigen::VectorXd& xi)
{
    const int nen = dim + 1;
    BasisValues v;
    v.N = barycentric(xi);
    v.DN = Eigen::MatrixXd::Zero(nen, dim);
    v.DN.row(0).setConstant(-1.0);
    v.DN.bottomRows(dim).setIdentity();

    const double scale = dim == 2 ? 27.0 : 256.0;
    v.bubble = scale * v.N.prod();
    v.bubble_grad = Eigen::VectorXd::Zero(dim);
    for (int k = 0; k < nen; ++k) {
        double others = scale;
        for (int m = 0; m < nen; ++m) {
            if (m != k) others *= v.N[m];
        }
        v.bubble_grad += others * v.DN.row(k).transpose();
    }
    return v;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        // Newton on P_n from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double pn = n == 0 ? 1.0 : p1;
            const double pn1 = n == 0 ? 0.0 : p0;
            dp = n * (x * pn - pn1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        // Map [-1, 1] -> [0, 1].
        nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
        weights[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

namespace {

QuadratureRule from_points(int dim, int degree, const std::vector<std::vector<double>>& pts,
                           const std::vector<double>& w)
{
    QuadratureRule rule;
    rule.dim = dim;
    rule.degree = degree;
    rule.points.resize(static_cast<Index>(pts.size()), dim);
    rule.weights.resize(static_cast<Index>(w.size()));
    for (std::size_t q = 0; q < pts.size(); ++q) {
        for (int d = 0; d < dim; ++d) rule.points(static_cast<Index>(q), d) = pts[q][static_cast<std::size_t>(d)];
        rule.weights[static_cast<Index>(q)] = w[q];
    }
    return rule;
}

int points_for(int poly_degree)
{
    return std::max(1, (poly_degree + 2) / 2);
}

QuadratureRule collapsed_rule(int dim, int degree)
{
    std::vector<std::vector<double>> pts;
    std::vector<double> w;
    std::vector<double> xu, wu, xv, wv, xw, ww;
    if (dim == 1) {
        gauss_legendre(points_for(degree), xu, wu);
        for (std::size_t i = 0; i < xu.size(); ++i) {
            pts.push_back({xu[i]});
            w.push_back(wu[i]);
        }
    } else if (dim == 2) {
        // xi1 = u, xi2 = v (1 - u); jacobian (1 - u).
        gauss_legendre(points_for(degree + 1), xu, wu);
        gauss_legendre(points_for(degree), xv, wv);
        for (std::size_t i = 0; i < xu.size(); ++i) {
            for (std::size_t j = 0; j < xv.size(); ++j) {
                pts.push_back({xu[i], xv[j] * (1.0 - xu[i])});
                w.push_back(wu[i] * wv[j] * (1.0 - xu[i]));
            }
        }
    } else {
        // xi1 = u, xi2 = v (1 - u), xi3 = w (1 - u)(1 - v); jacobian (1 - u)^2 (1 - v).
        gauss_legendre(points_for(degree + 2), xu, wu);
        gauss_legendre(points_for(degree + 1), xv, wv);
        gauss_legendre(points_for(degree), xw, ww);
        for (std::size_t i = 0; i < xu.size(); ++i) {
            for (std::size_t j = 0; j < xv.size(); ++j) {
                for (std::size_t k = 0; k < xw.size(); ++k) {
                    const double u = xu[i];
                    const double v = xv[j];
                    pts.push_back({u, v * (1.0 - u), xw[k] * (1.0 - u) * (1.0 - v)});
                    w.push_back(wu[i] * wv[j] * ww[k] * (1.0 - u) * (1.0 - u) * (1.0 - v));
                }
            }
        }
    }
    return from_points(dim, degree, pts, w);
}

}  // namespace

QuadratureRule quadrature(int dim, int degree)
{
    if (dim < 1 || dim > 3) throw Error("quadrature dimension must be 1, 2 or 3");
    if (degree < 0 || degree > kMaxQuadratureDegree) {
        throw Error("unsupported quadrature degree " + std::to_string(degree) + " (supported 0.." +
                    std::to_string(kMaxQuadratureDegree) + ")");
    }
    if (degree <= 1) {
        if (dim == 1) return from_points(1, degree, {{0.5}}, {1.0});
        if (dim == 2) return from_points(2, degree, {{1.0 / 3.0, 1.0 / 3.0}}, {0.5});
        return from_points(3, degree, {{0.25, 0.25, 0.25}}, {1.0 / 6.0});
    }
    if (degree == 2 && dim == 2) {
        const double a = 2.0 / 3.0;
        const double b = 1.0 / 6.0;
        return from_points(2, 2, {{b, b}, {a, b}, {b, a}}, {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0});
    }
    if (degree == 2 && dim == 3) {
        const double a = (5.0 + 3.0 * std::sqrt(5.0)) / 20.0;
        const double b = (5.0 - std::sqrt(5.0)) / 20.0;
        const double w = 1.0 / 24.0;
        return from_points(3, 2, {{b, b, b}, {a, b, b}, {b, a, b}, {b, b, a}}, {w, w, w, w});
    }
    return collapsed_rule(dim, degree);
}

int default_quadrature_degree(int dim)
{
    return dim == 2 ? 4 : 6;
}

ElementKinematics kinematics(const Mesh& mesh, Index e, const Eigen::MatrixXd& DN)
{
    const int dim = mesh.dim();
    const int nen = dim + 1;
    auto nodes = mesh.element(e);
    Eigen::MatrixXd X(nen, dim);
    for (int a = 0; a < nen; ++a) {
        auto c = mesh.node(nodes[static_cast<std::size_t>(a)]);
        for (int d = 0; d < dim; ++d) X(a, d) = c[static_cast<std::size_t>(d)];
    }
    ElementKinematics k;
    k.J = X.transpose() * DN;
    k.detJ = k.J.determinant();
    double h = 0.0;
    for (int a = 1; a < nen; ++a) h = std::max(h, (X.row(a) - X.row(0)).norm());
    if (!(k.detJ > 1e-14 * std::pow(h, dim))) {
        throw DegenerateElement(e, "singular or inverted element jacobian (detJ = " + std::to_string(k.detJ) + ")");
    }
    k.Jinv = k.J.inverse();
    k.grads_phys = DN * k.Jinv;
    return k;
}

TabulatedBasis TabulatedBasis::build(int dim, int degree)
{
    TabulatedBasis t;
    t.rule = quadrature(dim, degree);
    t.values.reserve(static_cast<std::size_t>(t.rule.size()));
    for (Index q = 0; q < t.rule.size(); ++q) {
        t.values.push_back(eval_basis(dim, t.rule.points.row(q).transpose()));
    }
    return t;
}

}  // namespace vms
