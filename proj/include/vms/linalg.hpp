#pragma once

#include "vms/common.hpp"

#include <memory>
#include <span>
#include <vector>

namespace vms::linalg {

/// Compressed sparse row matrix; column indices strictly increase in a row.
struct CsrMatrix {
    Index rows = 0;
    Index cols = 0;
    std::vector<Index> row_offsets;  // rows + 1
    std::vector<Index> col_indices;
    std::vector<double> values;

    [[nodiscard]] Index nonzeros() const noexcept { return static_cast<Index>(values.size()); }
    /// Position of (r, c) in `values`, or -1 if outside the pattern.
    [[nodiscard]] Index find(Index r, Index c) const;
    [[nodiscard]] double at(Index r, Index c) const;
    void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
    [[nodiscard]] Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
    [[nodiscard]] Eigen::MatrixXd to_dense() const;
    [[nodiscard]] Eigen::VectorXd diagonal() const;
    void set_zero() { std::fill(values.begin(), values.end(), 0.0); }

    /// Pattern from per-row sorted unique column lists; values zeroed.
    [[nodiscard]] static CsrMatrix from_pattern(Index rows, Index cols, const std::vector<std::vector<Index>>& pattern);
    [[nodiscard]] static CsrMatrix from_dense(const Eigen::MatrixXd& dense, double drop = 0.0);
};

/// Largest |A(i,j) - A(j,i)| over the pattern union.
[[nodiscard]] double asymmetry(const CsrMatrix& a);

/// Largest entrywise difference of two matrices (patterns may differ).
[[nodiscard]] double max_abs_difference(const CsrMatrix& a, const CsrMatrix& b);

enum class PreconditionerKind { none, jacobi, ilu0 };

[[nodiscard]] PreconditionerKind parse_preconditioner(const std::string& name);
[[nodiscard]] std::string to_string(PreconditionerKind kind);

struct KrylovConfig {
    double rtol = 1e-12;
    int max_iters = 50;  // restart cycles
    int restart = 50;    // Krylov dimension per cycle
    PreconditionerKind preconditioner = PreconditionerKind::ilu0;
};

struct GmresResult {
    Eigen::VectorXd x;
    int iterations = 0;          // total inner iterations
    int cycles = 0;
    int max_cycle_iterations = 0;
    double achieved_residual = 0.0;  // ||b - A x|| / ||b||, recomputed
    PreconditionerKind preconditioner_used = PreconditionerKind::none;
};

/// Krylov failure: iteration limit hit or Arnoldi breakdown short of the
/// tolerance. Carries the iterate reached.
class LinearSolveError : public Error {
public:
    LinearSolveError(const std::string& what, int iterations, double residual)
        : Error(what), iterations_(iterations), residual_(residual) {}
    [[nodiscard]] int iterations() const noexcept { return iterations_; }
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

class Preconditioner {
public:
    virtual ~Preconditioner() = default;
    /// out = M^-1 in
    virtual void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const = 0;
    [[nodiscard]] virtual PreconditionerKind kind() const = 0;
};

class IdentityPreconditioner final : public Preconditioner {
public:
    void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const override { out = in; }
    [[nodiscard]] PreconditionerKind kind() const override { return PreconditionerKind::none; }
};

class JacobiPreconditioner final : public Preconditioner {
public:
    explicit JacobiPreconditioner(const CsrMatrix& a);
    void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const override;
    [[nodiscard]] PreconditionerKind kind() const override { return PreconditionerKind::jacobi; }

private:
    Eigen::VectorXd inv_diag_;
};

/// Thrown by Ilu0 when a pivot vanishes.
class ZeroPivot : public Error {
public:
    using Error::Error;
};

/// Zero-fill incomplete LU on the pattern of A (unit lower factor).
class Ilu0 final : public Preconditioner {
public:
    explicit Ilu0(const CsrMatrix& a);
    void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const override;
    [[nodiscard]] PreconditionerKind kind() const override { return PreconditionerKind::ilu0; }
    [[nodiscard]] const CsrMatrix& factors() const noexcept { return lu_; }

private:
    CsrMatrix lu_;
    std::vector<Index> diag_;
};

/// Builds the requested preconditioner; a zero ILU0 pivot falls back to
/// Jacobi with a logged notice.
[[nodiscard]] std::unique_ptr<Preconditioner> make_preconditioner(const CsrMatrix& a, PreconditionerKind kind);

/// Restarted GMRES with right preconditioning. Throws LinearSolveError.
[[nodiscard]] GmresResult gmres_solve(const CsrMatrix& a, const Eigen::VectorXd& b, const KrylovConfig& cfg);
[[nodiscard]] GmresResult gmres_solve(const CsrMatrix& a, const Eigen::VectorXd& b, const KrylovConfig& cfg,
                                      const Preconditioner& m);

/// Matrix singular to working precision.
class SingularMatrix : public Error {
public:
    using Error::Error;
};

/// LU with partial pivoting.
[[nodiscard]] Eigen::VectorXd dense_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// Sparse LU direct solve.
[[nodiscard]] Eigen::VectorXd sparse_direct_solve(const CsrMatrix& a, const Eigen::VectorXd& b);

}  // namespace vms::linalg
