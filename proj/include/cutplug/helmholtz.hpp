#ifndef CUTPLUG_HELMHOLTZ_HPP
#define CUTPLUG_HELMHOLTZ_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <memory>

#include "cutplug/levelset.hpp"
#include "cutplug/mesh.hpp"
#include "cutplug/quadrature.hpp"

namespace cutplug {

using Complex = std::complex<double>;
using SpMatC = Eigen::SparseMatrix<Complex>;
using SpMatD = Eigen::SparseMatrix<double>;

// Air properties and drive. `losses` toggles the viscothermal wall condition;
// off forces both boundary-layer thicknesses to zero (pure Neumann walls).
struct PhysicsParams {
  double c0 = 343.20;       // speed of sound [m/s]
  double rho0 = 1.2044;     // density [kg/m^3]
  double nu = 1.5061e-5;    // kinematic viscosity [m^2/s]
  double prandtl = 0.7078;  // Prandtl number
  double cp = 1004.9;       // isobaric specific heat [J/(kg K)]
  double gamma = 1.4;       // heat capacity ratio
  double a_d = 1.0;         // diaphragm acceleration amplitude [m/s^2]
  bool losses = true;
};

// Viscous and thermal boundary-layer thicknesses at angular frequency omega:
// delta_V = sqrt(2 nu / omega), delta_T = sqrt(2 lambda / (omega rho0 cp))
// with lambda = cp * (rho0 nu) / prandtl. Zero when losses are off.
struct BoundaryLayerThicknesses {
  double delta_V = 0.0;
  double delta_T = 0.0;
};
BoundaryLayerThicknesses boundary_layer_thicknesses(const PhysicsParams& p,
                                                    double omega);

// Frequency-dependent scalars of the wall condition
//   psi(q,p;n) = alpha_T q p + alpha_V (grad q . grad p - (dq/dn)(dp/dn)),
// alpha_T = delta_T k^2 (i-1)(gamma-1)/2,  alpha_V = delta_V (i-1)/2.
struct WentzellCoeffs {
  double k = 0.0;
  double delta_V = 0.0;
  double delta_T = 0.0;
  Complex alpha_T{0.0, 0.0};
  Complex alpha_V{0.0, 0.0};
};
WentzellCoeffs wentzell_coeffs(const PhysicsParams& p, double omega);

// Frequency-independent pieces of the discrete operator for one design:
//   A(k) = S - k^2 M + i k B_out + alpha_T(k) M_w + alpha_V(k) K_w + eps_s G
// over the active DOFs, identity rows elsewhere. All pieces are real symmetric
// and share the acoustic-domain quadrature (cut cells integrate their inside
// polygons; the lossy wall set is diaphragm + chamber/design Dirichlet
// interface + cut boundary).
struct StateOperator {
  SpMatD S;      // volume stiffness over the acoustic domain
  SpMatD M;      // volume mass
  SpMatD B_out;  // outlet boundary mass
  SpMatD M_w;    // lossy-wall boundary mass
  SpMatD K_w;    // lossy-wall tangential stiffness
  SpMatD G;      // ghost penalty, h^3 facet weights included
  Eigen::VectorXd b_dir;     // diaphragm load direction: rho0 (n.e_a) int N_i
  Eigen::VectorXd r_outlet;  // outlet mean weights: (1/|Gamma_out|) int N_i
  double outlet_length = 0.0;
  std::vector<bool> active;
  int n_dofs = 0;
};

// A DOF is active when at least one cell carrying it is Inside or Cut.
// Vertex DOFs look at all incident cells, edge DOFs at their facet's two.
std::vector<bool> active_dof_mask(const Mesh& mesh, const CutGeometry& cut,
                                  const P2Space& space);

// Assembles the frequency-independent operator pieces. The diaphragm load uses
// the axial unit vector e_a = (1,0) (duct axis convention; the diaphragm is
// the x=0 wall). Throws when the active set is empty or a facet degenerates.
StateOperator assemble_operator(const Mesh& mesh, const CutGeometry& cut,
                                const P2Space& space,
                                const PhysicsParams& phys);

// A and b for one frequency: combines the stored pieces with the given
// coefficients and stabilization weight. b = a_d * b_dir as a complex vector.
void combine_system(const StateOperator& op, const WentzellCoeffs& cf,
                    double eps_s, double a_d, SpMatC& A, Eigen::VectorXcd& b);

// One-call form of the above (assemble + combine).
void assemble_state(const Mesh& mesh, const CutGeometry& cut,
                    const P2Space& space, const WentzellCoeffs& cf,
                    const PhysicsParams& phys, double eps_s, SpMatC& A,
                    Eigen::VectorXcd& b);

// Sparse LU of one frequency's matrix; reused by state and adjoint solves
// (A is symmetric, so A^T z = r shares the factorization). Iterative
// refinement drives the relative residual below 1e-10 or throws.
class FrequencySolver {
 public:
  FrequencySolver();
  ~FrequencySolver();
  FrequencySolver(FrequencySolver&&) noexcept;
  FrequencySolver& operator=(FrequencySolver&&) noexcept;

  void factorize(const SpMatC& A);  // throws on singular factorization
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;
  double last_residual() const { return last_residual_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  mutable double last_residual_ = 0.0;
};

// Mean outlet pressure (1/|Gamma_out|) int_{Gamma_out} p.
Complex outlet_pressure(const StateOperator& op, const Eigen::VectorXcd& p);

// Discrete power balance of a solved state:
//   | k p*B_out p + (delta_T k^2 (gamma-1)/2) p*M_w p
//     + (delta_V/2) p*K_w p - Im(conj(p).b) | / |Im(conj(p).b)|.
// Exact (up to solver residual) because the ghost penalty is real and the
// identity follows from testing the system with conj(p).
double power_balance_residual(const StateOperator& op,
                              const WentzellCoeffs& cf,
                              const PhysicsParams& phys, double a_d,
                              const Eigen::VectorXcd& p);

}  // namespace cutplug

#endif
