#include "vms/linalg.hpp"

#include <Eigen/SparseLU>

namespace vms::linalg {

Eigen::VectorXd dense_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
{
    if (a.rows() != a.cols() || a.rows() != b.size()) throw Error("dense_solve: dimension mismatch");
    if (a.rows() == 0) return {};
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const auto& u = lu.matrixLU();
    const double scale = a.cwiseAbs().maxCoeff();
    const double pivot = u.diagonal().cwiseAbs().minCoeff();
    if (!(pivot > std::numeric_limits<double>::epsilon() * scale * static_cast<double>(a.rows()))) {
        throw SingularMatrix("dense_solve: matrix is singular to working precision");
    }
    return lu.solve(b);
}

Eigen::VectorXd sparse_direct_solve(const CsrMatrix& a, const Eigen::VectorXd& b)
{
    if (a.rows != a.cols || a.rows != b.size()) throw Error("sparse_direct_solve: dimension mismatch");
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(a.values.size());
    for (Index r = 0; r < a.rows; ++r) {
        for (Index k = a.row_offsets[static_cast<std::size_t>(r)]; k < a.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
            triplets.emplace_back(r, a.col_indices[static_cast<std::size_t>(k)], a.values[static_cast<std::size_t>(k)]);
        }
    }
    Eigen::SparseMatrix<double> s(a.rows, a.cols);
    s.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(s);
    if (lu.info() != Eigen::Success) throw SingularMatrix("sparse_direct_solve: factorization failed");
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success || !x.allFinite()) throw SingularMatrix("sparse_direct_solve: solve failed");
    return x;
}

}  // namespace vms::linalg
