#ifndef CUTPLUG_LUMPED_HPP
#define CUTPLUG_LUMPED_HPP

#include <complex>
#include <vector>

namespace cutplug {

// Compression-driver single-degree-of-freedom model: a diaphragm of area
// kappa * S_wg accelerating against a chamber of depth d feeding a matched
// waveguide. All SI.
struct LumpedParams {
  double d = 0.5e-3;      // chamber depth [m]
  double kappa = 12.0;    // compression ratio
  double rho0 = 1.2044;   // air density [kg/m^3]
  double c0 = 343.20;     // speed of sound [m/s]
  double a_d = 1.0;       // diaphragm acceleration amplitude [m/s^2]
  double L = 50.5e-3;     // diaphragm->outlet distance for the ideal target [m]
};

// Chamber pressure p with  k(-d k + i/kappa) p = rho0 a_d.
std::complex<double> lumped_pressure(const LumpedParams& p, double k);

// |p| in closed form: rho0 |a_d| / (k sqrt(d^2 k^2 + 1/kappa^2)).
double lumped_pressure_abs(const LumpedParams& p, double k);

// Resonance-free outlet reference: lumped pressure delayed by the axial
// propagation distance, lumped_pressure * exp(-i k L).
std::complex<double> ideal_outlet_target(const LumpedParams& p, double k);

struct LumpedResponseRow {
  double f_hz;
  double abs_p;
};

// |p| over a frequency table (Hz).
std::vector<LumpedResponseRow> lumped_response_table(
    const LumpedParams& p, const std::vector<double>& freqs_hz);

}  // namespace cutplug

#endif
