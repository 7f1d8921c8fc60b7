#include "vms/linalg.hpp"

#include <cmath>
#include <sstream>

namespace vms::linalg {

PreconditionerKind parse_preconditioner(const std::string& name)
{
    if (name == "none") return PreconditionerKind::none;
    if (name == "jacobi") return PreconditionerKind::jacobi;
    if (name == "ilu0") return PreconditionerKind::ilu0;
    throw ConfigError("unknown preconditioner '" + name + "' (expected none, jacobi or ilu0)");
}

std::string to_string(PreconditionerKind kind)
{
    switch (kind) {
    case PreconditionerKind::none: return "none";
    case PreconditionerKind::jacobi: return "jacobi";
    case PreconditionerKind::ilu0: return "ilu0";
    }
    return "unknown";
}

JacobiPreconditioner::JacobiPreconditioner(const CsrMatrix& a)
{
    inv_diag_ = a.diagonal();
    for (Index i = 0; i < inv_diag_.size(); ++i) {
        inv_diag_[i] = inv_diag_[i] != 0.0 ? 1.0 / inv_diag_[i] : 1.0;
    }
}

void JacobiPreconditioner::apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const
{
    out = in.cwiseProduct(inv_diag_);
}

Ilu0::Ilu0(const CsrMatrix& a) : lu_(a), diag_(static_cast<std::size_t>(a.rows), -1)
{
    const Index n = a.rows;
    for (Index i = 0; i < n; ++i) diag_[static_cast<std::size_t>(i)] = lu_.find(i, i);
    std::vector<Index> position(static_cast<std::size_t>(n), -1);
    auto& val = lu_.values;
    const auto& col = lu_.col_indices;
    const auto& off = lu_.row_offsets;

    for (Index i = 0; i < n; ++i) {
        const auto begin = off[static_cast<std::size_t>(i)];
        const auto end = off[static_cast<std::size_t>(i) + 1];
        double row_scale = 0.0;
        for (Index k = begin; k < end; ++k) {
            position[static_cast<std::size_t>(col[static_cast<std::size_t>(k)])] = k;
            row_scale = std::max(row_scale, std::abs(val[static_cast<std::size_t>(k)]));
        }
        for (Index kk = begin; kk < end; ++kk) {
            const Index k = col[static_cast<std::size_t>(kk)];
            if (k >= i) break;
            const Index dk = diag_[static_cast<std::size_t>(k)];
            const double multiplier = val[static_cast<std::size_t>(kk)] / val[static_cast<std::size_t>(dk)];
            val[static_cast<std::size_t>(kk)] = multiplier;
            for (Index jj = dk + 1; jj < off[static_cast<std::size_t>(k) + 1]; ++jj) {
                const Index p = position[static_cast<std::size_t>(col[static_cast<std::size_t>(jj)])];
                if (p >= 0) val[static_cast<std::size_t>(p)] -= multiplier * val[static_cast<std::size_t>(jj)];
            }
        }
        const Index di = diag_[static_cast<std::size_t>(i)];
        if (di < 0 || !(std::abs(val[static_cast<std::size_t>(di)]) > 1e-15 * row_scale) ||
            !std::isfinite(val[static_cast<std::size_t>(di)])) {
            throw ZeroPivot("ILU0 zero pivot in row " + std::to_string(i));
        }
        for (Index k = begin; k < end; ++k) position[static_cast<std::size_t>(col[static_cast<std::size_t>(k)])] = -1;
    }
}

void Ilu0::apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const
{
    const Index n = lu_.rows;
    const auto& val = lu_.values;
    const auto& col = lu_.col_indices;
    const auto& off = lu_.row_offsets;
    out = in;
    for (Index i = 0; i < n; ++i) {
        double s = out[i];
        for (Index k = off[static_cast<std::size_t>(i)]; k < diag_[static_cast<std::size_t>(i)]; ++k) {
            s -= val[static_cast<std::size_t>(k)] * out[col[static_cast<std::size_t>(k)]];
        }
        out[i] = s;
    }
    for (Index i = n - 1; i >= 0; --i) {
        double s = out[i];
        const Index d = diag_[static_cast<std::size_t>(i)];
        for (Index k = d + 1; k < off[static_cast<std::size_t>(i) + 1]; ++k) {
            s -= val[static_cast<std::size_t>(k)] * out[col[static_cast<std::size_t>(k)]];
        }
        out[i] = s / val[static_cast<std::size_t>(d)];
    }
}

std::unique_ptr<Preconditioner> make_preconditioner(const CsrMatrix& a, PreconditionerKind kind)
{
    switch (kind) {
    case PreconditionerKind::none: return std::make_unique<IdentityPreconditioner>();
    case PreconditionerKind::jacobi: return std::make_unique<JacobiPreconditioner>(a);
    case PreconditionerKind::ilu0:
        try {
            return std::make_unique<Ilu0>(a);
        } catch (const ZeroPivot& e) {
            log_notice(std::string(e.what()) + "; falling back to jacobi");
            return std::make_unique<JacobiPreconditioner>(a);
        }
    }
    return std::make_unique<IdentityPreconditioner>();
}

GmresResult gmres_solve(const CsrMatrix& a, const Eigen::VectorXd& b, const KrylovConfig& cfg)
{
    auto m = make_preconditioner(a, cfg.preconditioner);
    return gmres_solve(a, b, cfg, *m);
}

GmresResult gmres_solve(const CsrMatrix& a, const Eigen::VectorXd& b, const KrylovConfig& cfg, const Preconditioner& m)
{
    if (a.rows != a.cols || a.rows != b.size()) throw Error("gmres_solve: dimension mismatch");
    if (!(cfg.rtol > 0.0) || cfg.max_iters < 1 || cfg.restart < 1) throw ConfigError("invalid Krylov configuration");

    const Index n = a.rows;
    GmresResult result;
    result.x = Eigen::VectorXd::Zero(n);
    result.preconditioner_used = m.kind();
    const double bnorm = b.norm();
    if (bnorm == 0.0) return result;
    if (!std::isfinite(bnorm)) throw LinearSolveError("gmres: non-finite right-hand side", 0, bnorm);

    const int restart = static_cast<int>(std::min<Index>(cfg.restart, n));
    Eigen::MatrixXd V(n, restart + 1);
    Eigen::MatrixXd Z(n, restart);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(restart + 1, restart);
    Eigen::VectorXd cs(restart), sn(restart), g(restart + 1);
    Eigen::VectorXd r(n), w(n), z(n);

    double rel = 1.0;
    for (int cycle = 0; cycle < cfg.max_iters; ++cycle) {
        a.multiply(result.x, r);
        r = b - r;
        const double beta = r.norm();
        rel = beta / bnorm;
        if (rel <= cfg.rtol) {
            result.achieved_residual = rel;
            return result;
        }
        ++result.cycles;
        V.col(0) = r / beta;
        g.setZero();
        g[0] = beta;
        H.setZero();
        int used = 0;
        bool breakdown = false;
        for (int j = 0; j < restart; ++j) {
            m.apply(V.col(j), z);
            Z.col(j) = z;
            a.multiply(z, w);
            const double wnorm0 = w.norm();
            // Two passes of modified Gram-Schmidt.
            for (int pass = 0; pass < 2; ++pass) {
                for (int i = 0; i <= j; ++i) {
                    const double h = V.col(i).dot(w);
                    H(i, j) += h;
                    w -= h * V.col(i);
                }
            }
            const double hnext = w.norm();
            H(j + 1, j) = hnext;
            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
                H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
                H(i, j) = t;
            }
            const double denom = std::hypot(H(j, j), H(j + 1, j));
            cs[j] = denom == 0.0 ? 1.0 : H(j, j) / denom;
            sn[j] = denom == 0.0 ? 0.0 : H(j + 1, j) / denom;
            H(j, j) = denom;
            H(j + 1, j) = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            ++used;
            ++result.iterations;
            if (!(hnext > 1e-14 * wnorm0)) {
                breakdown = true;
                break;
            }
            if (std::abs(g[j + 1]) / bnorm <= cfg.rtol) break;
            V.col(j + 1) = w / hnext;
        }
        result.max_cycle_iterations = std::max(result.max_cycle_iterations, used);
        const Eigen::VectorXd y =
            H.topLeftCorner(used, used).triangularView<Eigen::Upper>().solve(g.head(used));
        result.x += Z.leftCols(used) * y;
        if (!result.x.allFinite()) {
            throw LinearSolveError("gmres: iterate became non-finite", result.iterations, rel);
        }

        a.multiply(result.x, r);
        rel = (b - r).norm() / bnorm;
        if (rel <= cfg.rtol) {
            result.achieved_residual = rel;
            return result;
        }
        if (breakdown) {
            std::ostringstream msg;
            msg << "gmres: Arnoldi breakdown after " << result.iterations << " iterations with relative residual "
                << rel << " > " << cfg.rtol;
            throw LinearSolveError(msg.str(), result.iterations, rel);
        }
    }
    std::ostringstream msg;
    msg << "gmres: reached " << cfg.max_iters << " restart cycles (" << result.iterations
        << " iterations) with relative residual " << rel << " > " << cfg.rtol;
    throw LinearSolveError(msg.str(), result.iterations, rel);
}

}  // namespace vms::linalg
