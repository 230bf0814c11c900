#include "cutplug/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace cutplug {

const char* to_string(BfgsStatus s) {
  switch (s) {
    case BfgsStatus::Converged:
      return "CONVERGED";
    case BfgsStatus::MaxIterations:
      return "MAX_ITERATIONS";
    case BfgsStatus::LineSearchStall:
      return "LINE_SEARCH_STALL";
  }
  return "UNKNOWN";
}

BfgsResult bfgs_minimize(
    const Objective& objective, const Eigen::VectorXd& x0,
    const BfgsOptions& opts,
    const std::function<void(const BfgsIterate&, const Eigen::VectorXd&)>&
        on_iterate) {
  const Eigen::Index n = x0.size();
  if (n == 0) throw std::invalid_argument("bfgs_minimize: empty start vector");

  BfgsResult res;
  res.x = x0;
  res.grad = Eigen::VectorXd::Zero(n);
  res.J = objective(res.x, res.grad);  // a throw at the start propagates
  if (!std::isfinite(res.J))
    throw std::runtime_error("bfgs_minimize: non-finite initial objective");

  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;

  auto record = [&](int iter, double step) {
    BfgsIterate it{iter, res.J, res.grad.lpNorm<Eigen::Infinity>(), step};
    res.history.push_back(it);
    if (on_iterate) on_iterate(it, res.x);
  };
  record(0, 0.0);

  res.status = BfgsStatus::MaxIterations;
  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    if (res.grad.lpNorm<Eigen::Infinity>() <= opts.grad_tol) {
      res.status = BfgsStatus::Converged;
      break;
    }

    Eigen::VectorXd d = -(H * res.grad);
    double slope = d.dot(res.grad);
    if (!(slope < 0.0)) {  // lost positive definiteness; restart from steepest
      H.setIdentity();
      scaled = false;
      d = -res.grad;
      slope = d.dot(res.grad);
    }

    double t = opts.initial_step;
    bool accepted = false;
    double J_new = 0.0;
    Eigen::VectorXd x_new, g_new(n);
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      x_new = res.x + t * d;
      bool ok = true;
      try {
        J_new = objective(x_new, g_new);
      } catch (const std::exception&) {
        ok = false;  // evaluation failure rejects the trial step
      }
      if (ok && std::isfinite(J_new) &&
          J_new <= res.J + opts.armijo_c1 * t * slope) {
        accepted = true;
        break;
      }
      t *= opts.backtrack_factor;
    }
    if (!accepted) {
      res.status = BfgsStatus::LineSearchStall;
      break;
    }

    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = g_new - res.grad;
    const double sy = s.dot(y);
    if (sy > opts.curvature_floor * s.norm() * y.norm()) {
      if (!scaled) {
        H *= sy / y.dot(y);
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd Hy = H * y;
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T, kept symmetric.
      const double yHy = y.dot(Hy);
      H.noalias() -= rho * (Hy * s.transpose() + s * Hy.transpose());
      H.noalias() += (rho * rho * yHy + rho) * (s * s.transpose());
    } else {
      ++res.curvature_skips;
    }

    res.x = std::move(x_new);
    res.J = J_new;
    res.grad = std::move(g_new);
    res.iterations = iter;
    record(iter, t);
  }

  if (res.status == BfgsStatus::MaxIterations &&
      res.grad.lpNorm<Eigen::Infinity>() <= opts.grad_tol)
    res.status = BfgsStatus::Converged;
  return res;
}

}  // namespace cutplug
