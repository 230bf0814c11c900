#include <cmath>
#include <stdexcept>

#include "cutplug/optimizer.hpp"
#include "doctest.h"

using namespace cutplug;

TEST_SUITE("optimizer") {
  TEST_CASE("quadratic bowl converges in a few iterations") {
    const Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      g = x;
      return 0.5 * x.squaredNorm();
    };
    Eigen::VectorXd x0(2);
    x0 << 1.0, 1.0;
    const BfgsResult res = bfgs_minimize(f, x0, {});
    CHECK(res.status == BfgsStatus::Converged);
    CHECK(res.iterations <= 3);
    CHECK(res.x.norm() < 1e-10);
  }

  TEST_CASE("rosenbrock reaches the minimizer") {
    const Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      const double a = x[0], b = x[1];
      g.resize(2);
      g[0] = -400.0 * a * (b - a * a) - 2.0 * (1.0 - a);
      g[1] = 200.0 * (b - a * a);
      const double t1 = b - a * a, t2 = 1.0 - a;
      return 100.0 * t1 * t1 + t2 * t2;
    };
    Eigen::VectorXd x0(2);
    x0 << -1.2, 1.0;
    BfgsOptions opts;
    opts.max_iters = 200;
    const BfgsResult res = bfgs_minimize(f, x0, opts);
    Eigen::VectorXd star(2);
    star << 1.0, 1.0;
    CHECK((res.x - star).norm() < 1e-6);
    CHECK(res.iterations <= 200);
  }

  TEST_CASE("accepted objective values never increase") {
    const Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      const double a = x[0], b = x[1];
      g.resize(2);
      g[0] = -400.0 * a * (b - a * a) - 2.0 * (1.0 - a);
      g[1] = 200.0 * (b - a * a);
      const double t1 = b - a * a, t2 = 1.0 - a;
      return 100.0 * t1 * t1 + t2 * t2;
    };
    Eigen::VectorXd x0(2);
    x0 << -1.2, 1.0;
    BfgsOptions opts;
    opts.max_iters = 200;
    const BfgsResult res = bfgs_minimize(f, x0, opts);
    REQUIRE(res.history.size() >= 2);
    for (std::size_t i = 1; i < res.history.size(); ++i) {
      CHECK(res.history[i].J <= res.history[i - 1].J);
      CHECK(res.history[i].iter == static_cast<int>(i));
      CHECK(res.history[i].step > 0.0);
    }
    CHECK(res.history.front().step == 0.0);
  }

  TEST_CASE("zero-curvature directions are skipped, not applied") {
    // Linear objective: y = 0 on every step, so no update ever has curvature.
    const Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      g.resize(1);
      g[0] = 1.0;
      return x[0];
    };
    Eigen::VectorXd x0(1);
    x0 << 0.0;
    BfgsOptions opts;
    opts.max_iters = 5;
    const BfgsResult res = bfgs_minimize(f, x0, opts);
    CHECK(res.status == BfgsStatus::MaxIterations);
    CHECK(res.curvature_skips == 5);
    CHECK(res.iterations == 5);
  }

  TEST_CASE("an objective that always throws stalls the line search") {
    int calls = 0;
    const Objective f = [&calls](const Eigen::VectorXd& x,
                                 Eigen::VectorXd& g) {
      ++calls;
      if (calls > 1) throw std::runtime_error("unsolvable trial design");
      g.resize(1);
      g[0] = 2.0;
      return x[0] * 2.0;
    };
    Eigen::VectorXd x0(1);
    x0 << 1.0;
    BfgsOptions opts;
    opts.max_backtracks = 8;
    const BfgsResult res = bfgs_minimize(f, x0, opts);
    CHECK(res.status == BfgsStatus::LineSearchStall);
    CHECK(res.iterations == 0);
    CHECK(calls == 1 + 8);  // initial evaluation plus every rejected trial
    CHECK(res.x[0] == 1.0);
  }

  TEST_CASE("a throw at the initial point propagates") {
    const Objective f = [](const Eigen::VectorXd&, Eigen::VectorXd&) -> double {
      throw std::runtime_error("bad start");
    };
    Eigen::VectorXd x0(1);
    x0 << 0.0;
    CHECK_THROWS_WITH(bfgs_minimize(f, x0, {}), "bad start");
  }

  TEST_CASE("callback sees the initial point and every accepted step") {
    const Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      g = x;
      return 0.5 * x.squaredNorm();
    };
    Eigen::VectorXd x0(3);
    x0 << 1.0, -2.0, 0.5;
    int called = 0;
    const BfgsResult res = bfgs_minimize(
        f, x0, {}, [&](const BfgsIterate& it, const Eigen::VectorXd& x) {
          if (called == 0) {
            CHECK(it.iter == 0);
            CHECK(x == x0);
          }
          ++called;
        });
    CHECK(called == static_cast<int>(res.history.size()));
  }

  TEST_CASE("already-optimal start converges immediately") {
    const Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      g = Eigen::VectorXd::Zero(x.size());
      return 7.0;
    };
    Eigen::VectorXd x0(2);
    x0 << 3.0, 4.0;
    const BfgsResult res = bfgs_minimize(f, x0, {});
    CHECK(res.status == BfgsStatus::Converged);
    CHECK(res.iterations == 0);
    CHECK(res.x == x0);
  }
}
