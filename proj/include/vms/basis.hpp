#pragma once

#include "vms/mesh.hpp"

#include <vector>

namespace vms {

/// Linear simplex shape functions plus one interior bubble, evaluated at a
/// reference point. The bubble is the barycentric product scaled to 1 at the
/// centroid: 27 l1 l2 l3 (triangle) or 256 l1 l2 l3 l4 (tetrahedron).
struct BasisValues {
    Eigen::VectorXd N;            // nen
    Eigen::MatrixXd DN;           // nen x dim, reference derivatives
    double bubble = 0.0;
    Eigen::VectorXd bubble_grad;  // dim, reference derivatives
};

[[nodiscard]] BasisValues eval_basis(int dim, const Eigen::VectorXd& xi);

/// Barycentric coordinates (l0 = 1 - sum xi, l_k = xi_k).
[[nodiscard]] Eigen::VectorXd barycentric(const Eigen::VectorXd& xi);

/// Quadrature on the reference simplex {xi_k >= 0, sum xi_k <= 1}; dim = 1
/// is the unit interval.
struct QuadratureRule {
    int dim = 0;
    int degree = 0;
    Eigen::MatrixXd points;   // n_points x dim
    Eigen::VectorXd weights;  // sums to 1/dim!

    [[nodiscard]] Index size() const noexcept { return weights.size(); }
};

inline constexpr int kMaxQuadratureDegree = 12;

/// Rule exact for all polynomials of total degree <= `degree`. Degree 0/1 is
/// the centroid rule, degree 2 the symmetric vertex-biased rule, higher
/// degrees collapsed Gauss-Legendre products. Throws on degree > 12.
[[nodiscard]] QuadratureRule quadrature(int dim, int degree);

[[nodiscard]] int default_quadrature_degree(int dim);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Degenerate (zero or negative jacobian) element.
class DegenerateElement : public Error {
public:
    DegenerateElement(Index element, const std::string& what)
        : Error("element " + std::to_string(element) + ": " + what), element_(element) {}
    [[nodiscard]] Index element() const noexcept { return element_; }

private:
    Index element_;
};

/// Affine reference-to-physical map of one element.
struct ElementKinematics {
    Eigen::MatrixXd J;           // J(i, j) = dx_i / dxi_j
    Eigen::MatrixXd Jinv;
    double detJ = 0.0;
    Eigen::MatrixXd grads_phys;  // nen x dim, DN * Jinv

    [[nodiscard]] Eigen::VectorXd to_physical_gradient(const Eigen::VectorXd& ref_grad) const
    {
        return Jinv.transpose() * ref_grad;
    }
};

[[nodiscard]] ElementKinematics kinematics(const Mesh& mesh, Index e, const Eigen::MatrixXd& DN);

/// Basis values tabulated at the points of a quadrature rule. The element
/// map is affine, so one table serves every element.
struct TabulatedBasis {
    QuadratureRule rule;
    std::vector<BasisValues> values;

    [[nodiscard]] static TabulatedBasis build(int dim, int degree);
};

}  // namespace vms
