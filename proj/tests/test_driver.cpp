// Benchmark session: baseline design, evaluation, sweeps, optimization, and
// the adjoint/finite-difference agreement of the full objective.
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "cutplug/driver.hpp"
#include "cutplug/io.hpp"
#include "doctest.h"

using namespace cutplug;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Shrunken benchmark: the mesh size must stay below the chamber depth, so
// fast tests shrink the domain instead of coarsening the mesh.
Config coarse_config() {
  Config cfg;
  cfg.geometry.l_c = 8e-3;
  cfg.geometry.r_wg = 4e-3;
  cfg.geometry.l_wg = 8e-3;
  cfg.geometry.l_p = 5e-3;
  cfg.geometry.kappa = 4.0;
  cfg.h = 0.49e-3;
  cfg.frequencies.f_min_hz = 5000.0;
  cfg.frequencies.f_max_hz = 10000.0;
  cfg.frequencies.count = 3;
  cfg.optimization.max_iters = 2;
  return cfg;
}

double wall_distance(const GeometryParams& g, const Point2& q) {
  const double x0 = g.d, y0 = g.slit_width();
  const double dx = g.l_p, dy = g.r_wg - g.slit_width();
  return (dx * (q.y - y0) - dy * (q.x - x0)) / std::hypot(dx, dy);
}

}  // namespace

TEST_SUITE("driver") {

TEST_CASE("baseline design reproduces the straight wall") {
  const Config cfg = coarse_config();
  Benchmark bench(cfg);
  const LevelSetField ls = bench.level_set(bench.baseline());
  for (int v : bench.poisson().design_vertices()) {
    const double want = wall_distance(cfg.geometry, bench.mesh().points[v]);
    CHECK(ls.values[v] == doctest::Approx(want).epsilon(1e-9).scale(1e-2));
  }
}

TEST_CASE("evaluate at the baseline") {
  const Config cfg = coarse_config();
  Benchmark bench(cfg);
  const EvalResult r = bench.evaluate(bench.baseline());
  REQUIRE(r.response.rows.size() == 3);
  const LumpedParams lp = bench.lumped_params();
  double j_manual = 0.0;
  for (const FrequencyResponseRow& row : r.response.rows) {
    CHECK(row.k ==
          doctest::Approx(2.0 * kPi * row.f_hz / cfg.physics.c0).epsilon(1e-14));
    CHECK(std::abs(row.p_ideal) ==
          doctest::Approx(lumped_pressure_abs(lp, row.k)).epsilon(1e-12));
    j_manual += 0.5 * std::norm(row.p_out - row.p_ideal);
  }
  CHECK(r.J == doctest::Approx(j_manual).epsilon(1e-12));
  CHECK(r.J > 0.0);
  REQUIRE(r.power_residuals.size() == 3);
  for (double res : r.power_residuals) CHECK(res < 1e-10);
  CHECK(r.grad.size() == 0);  // not requested
}

TEST_CASE("evaluation is deterministic") {
  const Config cfg = coarse_config();
  Benchmark bench(cfg);
  EvalOptions opts;
  opts.want_gradient = true;
  const EvalResult a = bench.evaluate(bench.baseline(), opts);
  const EvalResult b = bench.evaluate(bench.baseline(), opts);
  CHECK(a.J == b.J);
  REQUIRE(a.grad.size() == b.grad.size());
  CHECK((a.grad - b.grad).norm() == 0.0);
  for (size_t i = 0; i < a.response.rows.size(); ++i) {
    CHECK(a.response.rows[i].p_out == b.response.rows[i].p_out);
  }
}

TEST_CASE("frequency and loss overrides") {
  const Config cfg = coarse_config();
  Benchmark bench(cfg);
  EvalOptions opts;
  opts.freqs_hz = std::vector<double>{6000.0};
  const EvalResult lossy = bench.evaluate(bench.baseline(), opts);
  REQUIRE(lossy.response.rows.size() == 1);
  CHECK(lossy.response.rows[0].f_hz == 6000.0);
  CHECK(lossy.power_residuals[0] < 1e-10);

  opts.losses = false;
  const EvalResult lossless = bench.evaluate(bench.baseline(), opts);
  CHECK(lossless.power_residuals[0] < 1e-10);
  CHECK(lossless.response.rows[0].p_out != lossy.response.rows[0].p_out);

  const FrequencyResponse swept =
      bench.sweep(bench.baseline(), {6000.0}, false);
  CHECK(swept.rows[0].p_out == lossless.response.rows[0].p_out);
}

TEST_CASE("losses damp the lossless response peak") {
  Config cfg = coarse_config();
  cfg.frequencies.f_min_hz = 4000.0;
  cfg.frequencies.f_max_hz = 12000.0;
  cfg.frequencies.count = 12;
  Benchmark bench(cfg);
  const std::vector<double> freqs = cfg.frequencies.frequencies_hz();
  const FrequencyResponse off = bench.sweep(bench.baseline(), freqs, false);
  const FrequencyResponse on = bench.sweep(bench.baseline(), freqs, true);
  size_t peak = 0;
  for (size_t i = 1; i < off.rows.size(); ++i)
    if (std::abs(off.rows[i].p_out) > std::abs(off.rows[peak].p_out)) peak = i;
  CHECK(std::abs(on.rows[peak].p_out) < std::abs(off.rows[peak].p_out));
}

TEST_CASE("drive amplitude scaling") {
  const Config cfg = coarse_config();
  Benchmark bench(cfg);
  Config scaled_cfg = cfg;
  scaled_cfg.physics.a_d *= 3.0;
  Benchmark scaled(scaled_cfg);
  EvalOptions opts;
  opts.want_gradient = true;
  const EvalResult r1 = bench.evaluate(bench.baseline(), opts);
  const EvalResult r3 = scaled.evaluate(scaled.baseline(), opts);
  for (size_t i = 0; i < r1.response.rows.size(); ++i) {
    CHECK(std::abs(r3.response.rows[i].p_out -
                   3.0 * r1.response.rows[i].p_out) <
          1e-12 * std::abs(r1.response.rows[i].p_out));
  }
  CHECK(r3.J == doctest::Approx(9.0 * r1.J).epsilon(1e-12));
  CHECK((r3.grad - 9.0 * r1.grad).norm() <= 1e-10 * r1.grad.norm());
}

TEST_CASE("adjoint gradient agrees with finite differences") {
  const Config cfg = coarse_config();
  Benchmark bench(cfg);
  const auto rows = bench.grad_check(bench.baseline(), 3, 1);
  REQUIRE(rows.size() == 3);
  for (const GradCheckRow& row : rows) {
    CHECK(row.component >= 0);
    CHECK(row.component < bench.poisson().n_free());
    CHECK(std::isfinite(row.adjoint));
    CHECK(std::isfinite(row.fd));
    CHECK(row.rel_err < 1e-4);
  }
}

TEST_CASE("design CSV round trip reproduces the objective") {
  const Config cfg = coarse_config();
  Benchmark bench(cfg);
  const double j0 = bench.evaluate(bench.baseline()).J;
  std::ostringstream out;
  write_design_csv(bench.poisson(), bench.baseline(), out);
  std::istringstream in(out.str());
  const DesignVector reread = read_design_csv(bench.poisson(), in);
  const double j1 = bench.evaluate(reread).J;
  CHECK(std::abs(j1 - j0) <= 1e-12 * std::abs(j0));
}

TEST_CASE("optimization descends from the baseline") {
  const Config cfg = coarse_config();
  Benchmark bench(cfg);
  int callbacks = 0;
  const OptimizeOutcome out = bench.optimize(
      bench.baseline(),
      [&](const BfgsIterate&, const DesignVector&) { ++callbacks; });
  REQUIRE_FALSE(out.bfgs.history.empty());
  CHECK(callbacks == static_cast<int>(out.bfgs.history.size()));
  double prev = out.bfgs.history.front().J;
  for (const BfgsIterate& it : out.bfgs.history) {
    CHECK(it.J <= prev + 1e-15);
    prev = it.J;
  }
  CHECK(out.bfgs.history.back().J < out.bfgs.history.front().J);
  CHECK(out.design.size() == bench.poisson().n_free());
  CHECK(out.response.rows.size() == cfg.frequencies.frequencies_hz().size());
}

TEST_CASE("lumped parameter mapping") {
  const Config cfg = coarse_config();
  Benchmark bench(cfg);
  const LumpedParams lp = bench.lumped_params();
  CHECK(lp.d == cfg.geometry.d);
  CHECK(lp.kappa == cfg.geometry.kappa);
  CHECK(lp.rho0 == cfg.physics.rho0);
  CHECK(lp.c0 == cfg.physics.c0);
  CHECK(lp.a_d == cfg.physics.a_d);
  CHECK(lp.L == cfg.geometry.axial_length());
}

}  // TEST_SUITE
