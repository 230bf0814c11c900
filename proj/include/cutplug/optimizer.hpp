#ifndef CUTPLUG_OPTIMIZER_HPP
#define CUTPLUG_OPTIMIZER_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace cutplug {

struct BfgsOptions {
  int max_iters = 100;
  double grad_tol = 1e-8;       // on the gradient infinity norm
  double armijo_c1 = 1e-4;
  double backtrack_factor = 0.5;
  double initial_step = 1.0;
  int max_backtracks = 30;
  double curvature_floor = 1e-12;  // skip update when s.y <= floor*|s||y|
};

enum class BfgsStatus { Converged, MaxIterations, LineSearchStall };

struct BfgsIterate {
  int iter = 0;
  double J = 0.0;
  double grad_inf = 0.0;
  double step = 0.0;  // accepted step length (0 for the initial record)
};

struct BfgsResult {
  Eigen::VectorXd x;
  double J = 0.0;
  Eigen::VectorXd grad;
  BfgsStatus status = BfgsStatus::MaxIterations;
  int iterations = 0;
  int curvature_skips = 0;
  std::vector<BfgsIterate> history;  // initial point + every accepted step
};

// Objective callback: J(x) with the gradient written to `grad`. May throw;
// a throw during line search counts as a rejected step, a throw at the
// initial point propagates.
using Objective =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

// Dense inverse-Hessian BFGS with backtracking Armijo line search. The
// inverse Hessian is rescaled by s.y/y.y before the first update. Accepted
// objective values never increase. An exhausted line search returns
// LineSearchStall (not an error). The optional callback runs after every
// accepted iterate (e.g. to snapshot designs).
BfgsResult bfgs_minimize(
    const Objective& objective, const Eigen::VectorXd& x0,
    const BfgsOptions& opts,
    const std::function<void(const BfgsIterate&, const Eigen::VectorXd&)>&
        on_iterate = nullptr);

const char* to_string(BfgsStatus s);

}  // namespace cutplug

#endif
