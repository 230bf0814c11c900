#include "cutplug/lumped.hpp"

#include <cmath>
#include <stdexcept>

namespace cutplug {

namespace {
void validate(const LumpedParams& p, double k) {
  if (p.d <= 0 || p.kappa <= 0 || p.rho0 <= 0 || p.c0 <= 0 || k <= 0)
    throw std::invalid_argument("lumped model: non-positive parameter");
}
}  // namespace

std::complex<double> lumped_pressure(const LumpedParams& p, double k) {
  validate(p, k);
  const std::complex<double> denom =
      k * std::complex<double>(-p.d * k, 1.0 / p.kappa);
  return p.rho0 * p.a_d / denom;
}

double lumped_pressure_abs(const LumpedParams& p, double k) {
  validate(p, k);
  return p.rho0 * std::abs(p.a_d) /
         (k * std::sqrt(p.d * p.d * k * k + 1.0 / (p.kappa * p.kappa)));
}

std::complex<double> ideal_outlet_target(const LumpedParams& p, double k) {
  return lumped_pressure(p, k) *
         std::exp(std::complex<double>(0.0, -k * p.L));
}

std::vector<LumpedResponseRow> lumped_response_table(
    const LumpedParams& p, const std::vector<double>& freqs_hz) {
  std::vector<LumpedResponseRow> rows;
  rows.reserve(freqs_hz.size());
  for (double f : freqs_hz) {
    const double k = 2.0 * M_PI * f / p.c0;
    rows.push_back({f, lumped_pressure_abs(p, k)});
  }
  return rows;
}

}  // namespace cutplug
