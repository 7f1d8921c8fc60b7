#pragma once

#include "vms/kernel.hpp"

namespace vms {

/// Element system with the fine scales eliminated by block Gauss
/// elimination, plus what is needed to recover the fine increment.
struct CondensedElement {
    Eigen::MatrixXd K_vv, K_vp, K_pv, K_pp;
    Eigen::VectorXd R1, R2;

    // recovery data
    Eigen::MatrixXd fine_inverse;  // (dRf/dbeta)^-1
    Eigen::MatrixXd dRf_dv, dRf_dp;
    Eigen::VectorXd Rf;
};

[[nodiscard]] CondensedElement condense_element(const ElementSystem& sys);

/// dbeta = (dRf/dbeta)^-1 (-Rf - dRf/dv dv - dRf/dp dp)
[[nodiscard]] Eigen::VectorXd recover_fine(const CondensedElement& elem, const Eigen::VectorXd& dv,
                                           const Eigen::VectorXd& dp);

/// Condensed blocks as one dense matrix/vector in node-major interleaved
/// order (u, v, [w,] p per node).
void interleave(const CondensedElement& elem, int dim, Eigen::MatrixXd& matrix, Eigen::VectorXd& residual);

/// Full three-field element system in interleaved coarse order followed by
/// the dim fine unknowns.
void interleave(const ElementSystem& sys, int dim, Eigen::MatrixXd& matrix, Eigen::VectorXd& residual);

}  // namespace vms
