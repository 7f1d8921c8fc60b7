#include "vms/kernel.hpp"

#include <cmath>

namespace vms {

ElementState gather(const Mesh& mesh, Index e, const State& state)
{
    const int dim = mesh.dim();
    const int nen = dim + 1;
    auto nodes = mesh.element(e);
    ElementState s;
    s.velocity.resize(nen, dim);
    s.pressure.resize(nen);
    for (int a = 0; a < nen; ++a) {
        const Index n = nodes[static_cast<std::size_t>(a)];
        for (int i = 0; i < dim; ++i) s.velocity(a, i) = state.velocity[n * dim + i];
        s.pressure[a] = state.pressure[n];
    }
    s.fine = state.fine.segment(e * dim, dim);
    return s;
}

namespace {

const QuadratureRule& face_rule(int face_dim)
{
    static const QuadratureRule segment = quadrature(1, 4);
    static const QuadratureRule triangle = quadrature(2, 4);
    return face_dim == 1 ? segment : triangle;
}

// Velocity is expanded over nen + 1 functions: the nen linear shape functions
// followed by the bubble. Rows of U hold the matching coefficients
// (coarse nodal velocities, then beta).
template <bool WithTangent>
void evaluate(const Mesh& mesh, Index e, const TabulatedBasis& basis, const ElementState& state,
              const CaseData& data, ElementSystem& out)
{
    const int dim = mesh.dim();
    const int nen = dim + 1;
    const int nv = nen + 1;
    const double nu2 = 2.0 * data.viscosity;
    const double mass = data.inverse_dt();
    const double conv = data.convection ? 1.0 : 0.0;

    const auto kin = kinematics(mesh, e, basis.values.front().DN);
    auto elem_nodes = mesh.element(e);

    Eigen::MatrixXd U(nv, dim);
    U.topRows(nen) = state.velocity;
    U.row(nen) = state.fine.transpose();
    Eigen::MatrixXd U_prev = Eigen::MatrixXd::Zero(nv, dim);
    if (data.transient() && data.previous != nullptr) {
        const auto prev = gather(mesh, e, *data.previous);
        U_prev.topRows(nen) = prev.velocity;
        U_prev.row(nen) = prev.fine.transpose();
    }
    Eigen::MatrixXd X(nen, 3);
    for (int a = 0; a < nen; ++a) X.row(a) = mesh.point(elem_nodes[static_cast<std::size_t>(a)]).transpose();

    Eigen::MatrixXd Rv = Eigen::MatrixXd::Zero(nv, dim);
    Eigen::VectorXd Rp = Eigen::VectorXd::Zero(nen);
    Eigen::MatrixXd Kvv, Kvp, Kpv;
    if constexpr (WithTangent) {
        Kvv = Eigen::MatrixXd::Zero(nv * dim, nv * dim);
        Kvp = Eigen::MatrixXd::Zero(nv * dim, nen);
        Kpv = Eigen::MatrixXd::Zero(nen, nv * dim);
    }

    Eigen::VectorXd phi(nv);
    Eigen::MatrixXd gphi(nv, dim);
    gphi.topRows(nen) = kin.grads_phys;

    for (Index q = 0; q < basis.rule.size(); ++q) {
        const auto& bv = basis.values[static_cast<std::size_t>(q)];
        const double w = basis.rule.weights[q] * kin.detJ;
        phi.head(nen) = bv.N;
        phi[nen] = bv.bubble;
        gphi.row(nen) = kin.to_physical_gradient(bv.bubble_grad).transpose();

        const Eigen::VectorXd v = U.transpose() * phi;
        const Eigen::MatrixXd G = U.transpose() * gphi;  // G(i, j) = dv_i / dx_j
        const double p = bv.N.dot(state.pressure);
        const Eigen::VectorXd convective = G * v;

        Eigen::VectorXd source = Eigen::VectorXd::Zero(dim);
        if (data.body_force) {
            const Vec3 x = X.transpose() * bv.N;
            source = data.body_force(x, data.time).head(dim);
        }
        Eigen::VectorXd point_force = conv * convective - source;
        if (mass != 0.0) {
            point_force += mass * (v - U_prev.transpose() * phi);
        }

        // sum_j dphi_A/dx_j G(i, j) = (gphi * G^T)(A, i)
        Rv.noalias() += w * (phi * point_force.transpose() + nu2 * gphi * G.transpose() - p * gphi);
        Rp.noalias() -= w * G.trace() * bv.N;

        if constexpr (WithTangent) {
            const Eigen::VectorXd advect = gphi * v;  // v . grad(phi_B)
            for (int A = 0; A < nv; ++A) {
                for (int B = 0; B < nv; ++B) {
                    const double diag = w * (nu2 * gphi.row(A).dot(gphi.row(B)) + mass * phi[A] * phi[B] +
                                             conv * phi[A] * advect[B]);
                    const double carrier = w * conv * phi[A] * phi[B];
                    for (int i = 0; i < dim; ++i) {
                        Kvv(A * dim + i, B * dim + i) += diag;
                        if (carrier != 0.0) {
                            for (int k = 0; k < dim; ++k) Kvv(A * dim + i, B * dim + k) += carrier * G(i, k);
                        }
                    }
                }
                for (int i = 0; i < dim; ++i) {
                    for (int b = 0; b < nen; ++b) {
                        Kvp(A * dim + i, b) -= w * gphi(A, i) * bv.N[b];
                        Kpv(b, A * dim + i) -= w * bv.N[b] * gphi(A, i);
                    }
                }
            }
        }
    }

    // Traction faces: linear shape functions only, the bubble vanishes there.
    for (Index f : mesh.faces_of_element(e)) {
        const auto& face = mesh.face(f);
        auto it = data.tractions.find(face.tag);
        if (it == data.tractions.end() || !it->second) continue;
        const auto& rule = face_rule(dim - 1);
        std::vector<int> local(face.nodes.size());
        for (std::size_t k = 0; k < face.nodes.size(); ++k) {
            for (int a = 0; a < nen; ++a) {
                if (elem_nodes[static_cast<std::size_t>(a)] == face.nodes[k]) local[k] = a;
            }
        }
        const Vec3 x0 = mesh.point(face.nodes[0]);
        double scale = 0.0;
        if (dim == 2) {
            scale = (mesh.point(face.nodes[1]) - x0).norm();
        } else {
            scale = (mesh.point(face.nodes[1]) - x0).cross(mesh.point(face.nodes[2]) - x0).norm();
        }
        for (Index q = 0; q < rule.size(); ++q) {
            const Eigen::VectorXd M = barycentric(rule.points.row(q).transpose());
            Vec3 x = Vec3::Zero();
            for (std::size_t k = 0; k < face.nodes.size(); ++k) x += M[static_cast<Index>(k)] * mesh.point(face.nodes[k]);
            const Eigen::VectorXd h = it->second(x, data.time).head(dim);
            const double w = rule.weights[q] * scale;
            for (std::size_t k = 0; k < face.nodes.size(); ++k) {
                Rv.row(local[k]) -= w * M[static_cast<Index>(k)] * h.transpose();
            }
        }
    }

    out.Rc.resize(nen * dim);
    for (int a = 0; a < nen; ++a) out.Rc.segment(a * dim, dim) = Rv.row(a).transpose();
    out.Rp = Rp;
    out.Rf = Rv.row(nen).transpose();

    if constexpr (WithTangent) {
        const int nc = nen * dim;
        out.dRc_dv = Kvv.topLeftCorner(nc, nc);
        out.dRc_db = Kvv.topRightCorner(nc, dim);
        out.dRf_dv = Kvv.bottomLeftCorner(dim, nc);
        out.dRf_db = Kvv.bottomRightCorner(dim, dim);
        out.dRc_dp = Kvp.topRows(nc);
        out.dRf_dp = Kvp.bottomRows(dim);
        out.dRp_dv = Kpv.leftCols(nc);
        out.dRp_db = Kpv.rightCols(dim);
        out.dRp_dp = Eigen::MatrixXd::Zero(nen, nen);
    }
}

}  // namespace

ElementResidual element_residual(const Mesh& mesh, Index e, const TabulatedBasis& basis,
                                 const ElementState& state, const CaseData& data)
{
    ElementSystem sys;
    evaluate<false>(mesh, e, basis, state, data, sys);
    return {std::move(sys.Rc), std::move(sys.Rp), std::move(sys.Rf)};
}

ElementSystem element_tangent(const Mesh& mesh, Index e, const TabulatedBasis& basis, const ElementState& state,
                              const CaseData& data)
{
    ElementSystem sys;
    evaluate<true>(mesh, e, basis, state, data, sys);
    return sys;
}

Eigen::MatrixXd fine_block_invert(const Eigen::MatrixXd& block, double* condition)
{
    if (block.rows() != block.cols() || block.rows() == 0) throw Error("fine block must be square");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(block);
    const auto& s = svd.singularValues();
    const double smin = s[s.size() - 1];
    const double cond = smin > 0.0 ? s[0] / smin : std::numeric_limits<double>::infinity();
    if (condition != nullptr) *condition = cond;
    if (!(cond <= kMaxFineCondition)) {
        throw SingularFineBlock(cond, "fine-scale block is singular or ill-conditioned (condition number " +
                                          std::to_string(cond) + ")");
    }
    return block.inverse();
}

}  // namespace vms
