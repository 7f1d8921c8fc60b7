#include "vms/condense.hpp"

namespace vms {

CondensedElement condense_element(const ElementSystem& sys)
{
    CondensedElement c;
    c.fine_inverse = fine_block_invert(sys.dRf_db);

    // Shared products with the inverse fine block.
    const Eigen::MatrixXd inv_fv = c.fine_inverse * sys.dRf_dv;
    const Eigen::MatrixXd inv_fp = c.fine_inverse * sys.dRf_dp;
    const Eigen::VectorXd inv_rf = c.fine_inverse * sys.Rf;

    c.K_vv = sys.dRc_dv - sys.dRc_db * inv_fv;
    c.K_vp = sys.dRc_dp - sys.dRc_db * inv_fp;
    c.K_pv = sys.dRp_dv - sys.dRp_db * inv_fv;
    c.K_pp = sys.dRp_dp - sys.dRp_db * inv_fp;
    c.R1 = sys.Rc - sys.dRc_db * inv_rf;
    c.R2 = sys.Rp - sys.dRp_db * inv_rf;

    c.dRf_dv = sys.dRf_dv;
    c.dRf_dp = sys.dRf_dp;
    c.Rf = sys.Rf;
    return c;
}

Eigen::VectorXd recover_fine(const CondensedElement& elem, const Eigen::VectorXd& dv, const Eigen::VectorXd& dp)
{
    if (elem.fine_inverse.size() == 0) throw Error("recover_fine: element has no condensation data");
    return elem.fine_inverse * (-elem.Rf - elem.dRf_dv * dv - elem.dRf_dp * dp);
}

namespace {

// Local interleaved position of coarse velocity (a, i) and pressure a.
inline Index vel_pos(int a, int i, int dim) { return a * (dim + 1) + i; }
inline Index pre_pos(int a, int dim) { return a * (dim + 1) + dim; }

template <class Blocks>
void scatter_coarse(const Blocks& vv, const Blocks& vp, const Blocks& pv, const Blocks& pp, int dim,
                    Eigen::MatrixXd& m)
{
    const int nen = dim + 1;
    for (int a = 0; a < nen; ++a) {
        for (int i = 0; i < dim; ++i) {
            const Index r = vel_pos(a, i, dim);
            for (int b = 0; b < nen; ++b) {
                for (int k = 0; k < dim; ++k) m(r, vel_pos(b, k, dim)) = vv(a * dim + i, b * dim + k);
                m(r, pre_pos(b, dim)) = vp(a * dim + i, b);
            }
        }
        const Index r = pre_pos(a, dim);
        for (int b = 0; b < nen; ++b) {
            for (int k = 0; k < dim; ++k) m(r, vel_pos(b, k, dim)) = pv(a, b * dim + k);
            m(r, pre_pos(b, dim)) = pp(a, b);
        }
    }
}

void scatter_coarse_vector(const Eigen::VectorXd& rv, const Eigen::VectorXd& rp, int dim, Eigen::VectorXd& r)
{
    const int nen = dim + 1;
    for (int a = 0; a < nen; ++a) {
        for (int i = 0; i < dim; ++i) r[vel_pos(a, i, dim)] = rv[a * dim + i];
        r[pre_pos(a, dim)] = rp[a];
    }
}

}  // namespace

void interleave(const CondensedElement& elem, int dim, Eigen::MatrixXd& matrix, Eigen::VectorXd& residual)
{
    const int n = (dim + 1) * (dim + 1);
    matrix.resize(n, n);
    residual.resize(n);
    scatter_coarse(elem.K_vv, elem.K_vp, elem.K_pv, elem.K_pp, dim, matrix);
    scatter_coarse_vector(elem.R1, elem.R2, dim, residual);
}

void interleave(const ElementSystem& sys, int dim, Eigen::MatrixXd& matrix, Eigen::VectorXd& residual)
{
    const int nen = dim + 1;
    const int nc = nen * (dim + 1);
    const int n = nc + dim;
    matrix.resize(n, n);
    residual.resize(n);
    scatter_coarse(sys.dRc_dv, sys.dRc_dp, sys.dRp_dv, sys.dRp_dp, dim, matrix);
    scatter_coarse_vector(sys.Rc, sys.Rp, dim, residual);
    for (int a = 0; a < nen; ++a) {
        for (int i = 0; i < dim; ++i) {
            const Index r = vel_pos(a, i, dim);
            for (int k = 0; k < dim; ++k) {
                matrix(r, nc + k) = sys.dRc_db(a * dim + i, k);
                matrix(nc + k, r) = sys.dRf_dv(k, a * dim + i);
            }
        }
        for (int k = 0; k < dim; ++k) {
            matrix(pre_pos(a, dim), nc + k) = sys.dRp_db(a, k);
            matrix(nc + k, pre_pos(a, dim)) = sys.dRf_dp(k, a);
        }
    }
    matrix.bottomRightCorner(dim, dim) = sys.dRf_db;
    residual.tail(dim) = sys.Rf;
}

}  // namespace vms
