#pragma once

#include "vms/basis.hpp"
#include "vms/state.hpp"

#include <limits>
#include <map>

namespace vms {

/// Physical data entering the element residuals.
struct CaseData {
    double viscosity = 1.0;
    VectorField body_force;                        // empty: zero
    std::map<std::string, VectorField> tractions;  // per face tag
    double dt = std::numeric_limits<double>::infinity();  // infinite: steady
    double time = 0.0;
    const State* previous = nullptr;  // v_n and beta_n for backward Euler
    bool convection = true;           // false: Stokes limit

    [[nodiscard]] bool transient() const noexcept { return std::isfinite(dt); }
    [[nodiscard]] double inverse_dt() const noexcept { return transient() ? 1.0 / dt : 0.0; }
};

/// Unknowns of one element: coarse nodal velocities, nodal pressures and the
/// fine-scale coefficient (v' = b^e beta).
struct ElementState {
    Eigen::MatrixXd velocity;  // nen x dim
    Eigen::VectorXd pressure;  // nen
    Eigen::VectorXd fine;      // dim
};

[[nodiscard]] ElementState gather(const Mesh& mesh, Index e, const State& state);

/// Coarse momentum, continuity and fine momentum residuals. Coarse velocity
/// entries are node-major: index a * dim + i.
struct ElementResidual {
    Eigen::VectorXd Rc;  // nen * dim
    Eigen::VectorXd Rp;  // nen
    Eigen::VectorXd Rf;  // dim
};

/// Residual blocks and the nine blocks of their consistent tangent.
struct ElementSystem {
    Eigen::VectorXd Rc, Rp, Rf;
    Eigen::MatrixXd dRc_dv, dRc_dp, dRc_db;
    Eigen::MatrixXd dRp_dv, dRp_dp, dRp_db;
    Eigen::MatrixXd dRf_dv, dRf_dp, dRf_db;
};

[[nodiscard]] ElementResidual element_residual(const Mesh& mesh, Index e, const TabulatedBasis& basis,
                                               const ElementState& state, const CaseData& data);

[[nodiscard]] ElementSystem element_tangent(const Mesh& mesh, Index e, const TabulatedBasis& basis,
                                            const ElementState& state, const CaseData& data);

/// Fine block too close to singular to eliminate.
class SingularFineBlock : public Error {
public:
    SingularFineBlock(double condition, const std::string& what) : Error(what), condition_(condition) {}
    [[nodiscard]] double condition() const noexcept { return condition_; }

private:
    double condition_;
};

inline constexpr double kMaxFineCondition = 1e12;

/// Explicit inverse of the dim x dim fine block; throws SingularFineBlock
/// when the 2-norm condition number exceeds 1e12.
[[nodiscard]] Eigen::MatrixXd fine_block_invert(const Eigen::MatrixXd& block, double* condition = nullptr);

}  // namespace vms
