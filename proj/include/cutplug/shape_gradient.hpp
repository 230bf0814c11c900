#ifndef CUTPLUG_SHAPE_GRADIENT_HPP
#define CUTPLUG_SHAPE_GRADIENT_HPP

#include <Eigen/Dense>

#include "cutplug/helmholtz.hpp"
#include "cutplug/levelset.hpp"

namespace cutplug {

// Adjoint right-hand side of the outlet-mean functional: r_i =
// (1/|Gamma_out|) int_{Gamma_out} N_i. The adjoint state solves A^T z = r and
// reuses the state factorization (A symmetric).
Eigen::VectorXcd adjoint_rhs(const StateOperator& op);

// The four contributions to the derivative of j = mean outlet pressure with
// respect to a nodal level-set perturbation w_l (P1 hat at free design vertex
// l), all supported on the cut boundary:
//   volume      - int (grad z . grad p - k^2 z p) w_l / |grad phi|
//   tangential  - alpha_V [ (P_T grad w_l . grad z)/|grad phi| dp/dn
//                           + dz/dn (P_T grad w_l . grad p)/|grad phi| ]
//   normal_psi  - int dpsi/dn (z,p;n) w_l / |grad phi|   (constant cell
//                 Hessians of the quadratic fields)
//   point_jump  - sum over cut points of n_S.(psi_1 m_1 + psi_2 m_2)
//                 w_l / |dphi/ds|  (one-sided where only one facet exists)
struct DjTerms {
  Eigen::VectorXcd volume;
  Eigen::VectorXcd tangential;
  Eigen::VectorXcd normal_psi;
  Eigen::VectorXcd point_jump;

  Eigen::VectorXcd total() const {
    return volume + tangential + normal_psi + point_jump;
  }
};

// Assembles dj(phi; w_l) over the free design vertices of `poisson`. Entries
// of vertices whose hat support contains no cut cell are exactly zero.
DjTerms assemble_dj(const Mesh& mesh, const CutGeometry& cut,
                    const P2Space& space, const DesignPoisson& poisson,
                    const WentzellCoeffs& cf, const Eigen::VectorXcd& state,
                    const Eigen::VectorXcd& adjoint);

enum class ObjectiveKind { Track, Power };

// Real gradient of the frequency-sum objective with respect to phi_hat.
// Per-frequency complex outlet derivatives d(p_out)/d(phi_hat) enter as
//   Track:  Re[ conj(p_out - p_ideal) . djdes ]
//   Power: -Re[ conj(p_out) . djdes ] / |p_out|^4
// plus, when tik_eps > 0, the mass-weighted Tikhonov term
// tik_eps * M (phi_hat - phi_hat_ref). The per-frequency weights are combined
// on the free-vertex derivative first, so one chain solve covers the sum.
Eigen::VectorXd objective_gradient(
    ObjectiveKind kind, const DesignPoisson& poisson,
    const std::vector<Eigen::VectorXcd>& dj_free_per_freq,
    const std::vector<Complex>& p_out, const std::vector<Complex>& p_ideal,
    double tik_eps, const DesignVector& phi_hat,
    const DesignVector& phi_hat_ref);

}  // namespace cutplug

#endif
