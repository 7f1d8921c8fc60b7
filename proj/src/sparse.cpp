#include "vms/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace vms::linalg {

Index CsrMatrix::find(Index r, Index c) const
{
    const auto begin = col_indices.begin() + row_offsets[static_cast<std::size_t>(r)];
    const auto end = col_indices.begin() + row_offsets[static_cast<std::size_t>(r) + 1];
    auto it = std::lower_bound(begin, end, c);
    if (it == end || *it != c) return -1;
    return static_cast<Index>(it - col_indices.begin());
}

double CsrMatrix::at(Index r, Index c) const
{
    const Index k = find(r, c);
    return k < 0 ? 0.0 : values[static_cast<std::size_t>(k)];
}

void CsrMatrix::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const
{
    y.resize(rows);
    for (Index r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (Index k = row_offsets[static_cast<std::size_t>(r)]; k < row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
            sum += values[static_cast<std::size_t>(k)] * x[col_indices[static_cast<std::size_t>(k)]];
        }
        y[r] = sum;
    }
}

Eigen::VectorXd CsrMatrix::operator*(const Eigen::VectorXd& x) const
{
    Eigen::VectorXd y;
    multiply(x, y);
    return y;
}

Eigen::MatrixXd CsrMatrix::to_dense() const
{
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        for (Index k = row_offsets[static_cast<std::size_t>(r)]; k < row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
            d(r, col_indices[static_cast<std::size_t>(k)]) = values[static_cast<std::size_t>(k)];
        }
    }
    return d;
}

Eigen::VectorXd CsrMatrix::diagonal() const
{
    Eigen::VectorXd d = Eigen::VectorXd::Zero(std::min(rows, cols));
    for (Index r = 0; r < d.size(); ++r) d[r] = at(r, r);
    return d;
}

CsrMatrix CsrMatrix::from_pattern(Index rows, Index cols, const std::vector<std::vector<Index>>& pattern)
{
    CsrMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_offsets.assign(static_cast<std::size_t>(rows) + 1, 0);
    for (Index r = 0; r < rows; ++r) {
        m.row_offsets[static_cast<std::size_t>(r) + 1] =
            m.row_offsets[static_cast<std::size_t>(r)] + static_cast<Index>(pattern[static_cast<std::size_t>(r)].size());
    }
    m.col_indices.reserve(static_cast<std::size_t>(m.row_offsets.back()));
    for (const auto& row : pattern) m.col_indices.insert(m.col_indices.end(), row.begin(), row.end());
    m.values.assign(m.col_indices.size(), 0.0);
    return m;
}

CsrMatrix CsrMatrix::from_dense(const Eigen::MatrixXd& dense, double drop)
{
    std::vector<std::vector<Index>> pattern(static_cast<std::size_t>(dense.rows()));
    for (Index r = 0; r < dense.rows(); ++r) {
        for (Index c = 0; c < dense.cols(); ++c) {
            if (std::abs(dense(r, c)) > drop) pattern[static_cast<std::size_t>(r)].push_back(c);
        }
    }
    CsrMatrix m = from_pattern(dense.rows(), dense.cols(), pattern);
    for (Index r = 0; r < m.rows; ++r) {
        for (Index k = m.row_offsets[static_cast<std::size_t>(r)]; k < m.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
            m.values[static_cast<std::size_t>(k)] = dense(r, m.col_indices[static_cast<std::size_t>(k)]);
        }
    }
    return m;
}

double asymmetry(const CsrMatrix& a)
{
    double worst = 0.0;
    for (Index r = 0; r < a.rows; ++r) {
        for (Index k = a.row_offsets[static_cast<std::size_t>(r)]; k < a.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
            const Index c = a.col_indices[static_cast<std::size_t>(k)];
            worst = std::max(worst, std::abs(a.values[static_cast<std::size_t>(k)] - a.at(c, r)));
        }
    }
    return worst;
}

double max_abs_difference(const CsrMatrix& a, const CsrMatrix& b)
{
    if (a.rows != b.rows || a.cols != b.cols) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    auto sweep = [&](const CsrMatrix& x, const CsrMatrix& y) {
        for (Index r = 0; r < x.rows; ++r) {
            for (Index k = x.row_offsets[static_cast<std::size_t>(r)]; k < x.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
                const Index c = x.col_indices[static_cast<std::size_t>(k)];
                worst = std::max(worst, std::abs(x.values[static_cast<std::size_t>(k)] - y.at(r, c)));
            }
        }
    };
    sweep(a, b);
    sweep(b, a);
    return worst;
}

}  // namespace vms::linalg
