#ifndef CUTPLUG_DRIVER_HPP
#define CUTPLUG_DRIVER_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cutplug/config.hpp"
#include "cutplug/helmholtz.hpp"
#include "cutplug/levelset.hpp"
#include "cutplug/lumped.hpp"
#include "cutplug/optimizer.hpp"
#include "cutplug/shape_gradient.hpp"

namespace cutplug {

struct FrequencyResponseRow {
  double f_hz = 0.0;
  double k = 0.0;
  Complex p_out{0.0, 0.0};
  Complex p_ideal{0.0, 0.0};  // lumped target aligned with the load convention
};

struct FrequencyResponse {
  std::vector<FrequencyResponseRow> rows;
};

struct EvalOptions {
  bool want_gradient = false;
  std::optional<bool> losses;          // overrides config when set
  std::optional<std::vector<double>> freqs_hz;  // overrides config grid
};

struct EvalResult {
  double J = 0.0;
  Eigen::VectorXd grad;  // empty unless requested
  FrequencyResponse response;
  std::vector<double> power_residuals;  // per frequency
  int n_perturbed_vertices = 0;
};

struct GradCheckRow {
  int component = 0;
  double adjoint = 0.0;
  double fd = 0.0;
  double rel_err = 0.0;
};

struct OptimizeOutcome {
  BfgsResult bfgs;
  DesignVector design;
  FrequencyResponse response;  // at the final design, on the config grid
};

// Benchmark session: mesh, P2 space, design-Poisson workspace with the
// straight-wall Dirichlet data, and the baseline design whose level set
// reproduces the straight channel from the slit corner to the waveguide
// corner.
class Benchmark {
 public:
  explicit Benchmark(const Config& cfg);

  // The Poisson workspace references the owned mesh; the session is pinned.
  Benchmark(const Benchmark&) = delete;
  Benchmark& operator=(const Benchmark&) = delete;
  Benchmark(Benchmark&&) = delete;
  Benchmark& operator=(Benchmark&&) = delete;

  const Config& config() const { return cfg_; }
  const Mesh& mesh() const { return mesh_; }
  const P2Space& space() const { return space_; }
  const DesignPoisson& poisson() const { return *poisson_; }
  const DesignVector& baseline() const { return baseline_; }

  LevelSetField level_set(const DesignVector& design) const;

  // Full composition design -> response (-> J, gradient). Solver failures
  // carry the offending frequency in the error message.
  EvalResult evaluate(const DesignVector& design, const EvalOptions& opts = {}) const;

  FrequencyResponse sweep(const DesignVector& design,
                          const std::vector<double>& freqs_hz,
                          std::optional<bool> losses = {}) const;

  OptimizeOutcome optimize(
      const DesignVector& start,
      const std::function<void(const BfgsIterate&, const DesignVector&)>&
          on_iterate = nullptr) const;

  // Adjoint gradient vs central finite differences of J on `n_components`
  // seeded random components at the mid-band frequency, stepping each
  // component over a decade sweep and keeping its best-agreeing step.
  std::vector<GradCheckRow> grad_check(const DesignVector& design,
                                       int n_components, unsigned seed) const;

  LumpedParams lumped_params() const;

 private:
  Config cfg_;
  Mesh mesh_;
  P2Space space_;
  std::unique_ptr<DesignPoisson> poisson_;
  DesignVector baseline_;
};

}  // namespace cutplug

#endif
