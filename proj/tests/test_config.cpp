#include <cmath>
#include <sstream>

#include "cutplug/config.hpp"
#include "doctest.h"

using namespace cutplug;

namespace {

const char* kFullConfig = R"(# benchmark configuration
[geometry]
l_c_mm = 28
d_mm = 0.5
r_wg_mm = 13
l_wg_mm = 33
l_p_mm = 17
kappa = 12

[mesh]
h_mm = 0.45

[physics]
c0 = 343.20
rho0 = 1.2044
nu = 1.5061e-5
prandtl = 0.7078
cp = 1004.9
gamma = 1.4
a_d = 1.0
losses = on

[frequencies]
f_min_hz = 3750
f_max_hz = 15000
count = 35

[optimization]
objective = track
tikhonov_eps = 0
max_iters = 100
grad_tol = 1e-14

[stabilization]
eps_s = 1e-2
)";

Config parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("full file parses with SI conversion") {
    const Config cfg = parse_text(kFullConfig);
    CHECK(cfg.geometry.l_c == doctest::Approx(28e-3).epsilon(1e-15));
    CHECK(cfg.geometry.d == doctest::Approx(0.5e-3).epsilon(1e-15));
    CHECK(cfg.geometry.r_wg == doctest::Approx(13e-3).epsilon(1e-15));
    CHECK(cfg.geometry.l_wg == doctest::Approx(33e-3).epsilon(1e-15));
    CHECK(cfg.geometry.l_p == doctest::Approx(17e-3).epsilon(1e-15));
    CHECK(cfg.geometry.kappa == 12.0);
    CHECK(cfg.h == doctest::Approx(0.45e-3).epsilon(1e-15));
    CHECK(cfg.physics.c0 == 343.20);
    CHECK(cfg.physics.rho0 == 1.2044);
    CHECK(cfg.physics.nu == 1.5061e-5);
    CHECK(cfg.physics.prandtl == 0.7078);
    CHECK(cfg.physics.cp == 1004.9);
    CHECK(cfg.physics.gamma == 1.4);
    CHECK(cfg.physics.a_d == 1.0);
    CHECK(cfg.physics.losses == true);
    CHECK(cfg.frequencies.f_min_hz == 3750.0);
    CHECK(cfg.frequencies.f_max_hz == 15000.0);
    CHECK(cfg.frequencies.count == 35);
    CHECK(cfg.optimization.objective == ObjectiveKind::Track);
    CHECK(cfg.optimization.tikhonov_eps == 0.0);
    CHECK(cfg.optimization.max_iters == 100);
    CHECK(cfg.optimization.grad_tol == 1e-14);
    CHECK(cfg.eps_s == 1e-2);
  }

  TEST_CASE("defaults cover omitted keys") {
    const Config cfg = parse_text("[mesh]\nh_mm = 1\n");
    CHECK(cfg.eps_s == 1e-2);
    CHECK(cfg.physics.a_d == 1.0);
    CHECK(cfg.optimization.tikhonov_eps == 0.0);
    CHECK(cfg.physics.losses == true);
    CHECK(cfg.frequencies.count == 35);
  }

  TEST_CASE("optimization frequency grid is geometric with the band ratio") {
    FrequencyGrid grid;
    grid.f_min_hz = 3750.0;
    grid.f_max_hz = 15000.0;
    grid.count = 35;
    CHECK(grid.ratio() ==
          doctest::Approx(1.0416160106505838).epsilon(1e-14));
    CHECK(grid.ratio() ==
          doctest::Approx(std::pow(2.0, 1.0 / 17.0)).epsilon(1e-14));
    const auto f = grid.frequencies_hz();
    REQUIRE(f.size() == 35);
    CHECK(f.front() == 3750.0);
    CHECK(f.back() == doctest::Approx(15000.0).epsilon(1e-12));
    for (std::size_t i = 1; i < f.size(); ++i)
      CHECK(f[i] / f[i - 1] == doctest::Approx(grid.ratio()).epsilon(1e-13));

    FrequencyGrid eval = grid;
    eval.count = 69;
    CHECK(eval.ratio() ==
          doctest::Approx(std::pow(2.0, 1.0 / 34.0)).epsilon(1e-14));
    CHECK(eval.frequencies_hz().size() == 69);
  }

  TEST_CASE("errors carry the offending line") {
    auto message_of = [](const std::string& text) {
      try {
        parse_text(text);
      } catch (const std::exception& e) {
        return std::string(e.what());
      }
      return std::string("NO THROW");
    };
    CHECK(message_of("[mesh]\nh_mm = 1\nbogus = 2\n").find("test.cfg:3") !=
          std::string::npos);
    CHECK(message_of("[mesh]\nh_mm = 1\nh_mm = 2\n").find("duplicate") !=
          std::string::npos);
    CHECK(message_of("[badblock]\n").find("unknown block") !=
          std::string::npos);
    CHECK(message_of("h_mm = 1\n").find("outside") != std::string::npos);
    CHECK(message_of("[mesh]\nh_mm = -3\n").find("positive") !=
          std::string::npos);
    CHECK(message_of("[geometry]\nd_mm = -0.5\n").find("d_mm") !=
          std::string::npos);
    CHECK(message_of("[mesh]\nh_mm\n").find("key = value") !=
          std::string::npos);
    CHECK(message_of("[physics]\nlosses = maybe\n").find("losses") !=
          std::string::npos);
    CHECK(message_of("[physics]\nc0 = fast\n").find("number") !=
          std::string::npos);
    CHECK(message_of("[mesh\nh_mm = 1\n").find("unterminated") !=
          std::string::npos);
    CHECK(message_of("[frequencies]\ncount = 2.5\n").find("integer") !=
          std::string::npos);
    CHECK(message_of("[frequencies]\nf_min_hz = 2\nf_max_hz = 1\n")
              .find("f_max_hz") != std::string::npos);
  }

  TEST_CASE("comments and blank lines are ignored") {
    const Config cfg = parse_text(
        "# leading comment\n\n[mesh]\n  h_mm = 2  # trailing comment\n\n");
    CHECK(cfg.h == doctest::Approx(2e-3));
  }

  TEST_CASE("missing file is reported") {
    CHECK_THROWS(parse_config_file("/nonexistent/path/config.cfg"));
  }
}
