#include "coirs/optimizer.hpp"

#include "coirs/channel.hpp"
#include "coirs/manifold.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace coirs {

void OptimizerConfig::validate() const {
  if (max_iters < 1)
    throw std::invalid_argument("max_iters must be >= 1");
  if (!(armijo_init > 0.0))
    throw std::invalid_argument("armijo_init must be positive");
  if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0))
    throw std::invalid_argument("armijo_shrink must lie in (0, 1)");
  if (armijo_max_backtracks < 0)
    throw std::invalid_argument("armijo_max_backtracks must be >= 0");
  if (!(grad_tol >= 0.0))
    throw std::invalid_argument("grad_tol must be non-negative");
}

Problem Problem::secrecy(SecrecyProblem prob, BlockMask free) {
  Problem p;
  p.evaluate = [prob = std::move(prob)](const IteratePoint &pt, bool grad) {
    return coirs::evaluate(prob, pt, grad);
  };
  p.free = free;
  return p;
}

const char *to_string(StopReason r) {
  switch (r) {
  case StopReason::converged:
    return "converged";
  case StopReason::max_iters:
    return "max_iters";
  case StopReason::line_search_failed:
    return "line_search_failed";
  }
  return "unknown";
}

TangentVector riemannian_gradient(const Problem &problem,
                                  const IteratePoint &pt,
                                  const TangentVector &euclidean) {
  TangentVector masked = euclidean;
  if (!problem.free.w)
    for (auto &x : masked.xi_blocks)
      x.setZero();
  if (!problem.free.phi1)
    masked.psi1.setZero();
  if (!problem.free.phi2)
    masked.psi2.setZero();
  return manifold::project_to_tangent(pt, masked);
}

TangentVector riemannian_gradient(const Problem &problem,
                                  const IteratePoint &pt) {
  return riemannian_gradient(problem, pt, problem.evaluate(pt, true).gradient);
}

ArmijoStep armijo_search(const Problem &problem, const IteratePoint &pt,
                         double value_at_pt, const TangentVector &grad,
                         const OptimizerConfig &cfg) {
  const double sq_norm = manifold::inner(grad, grad);
  std::vector<ArmijoTrial> history;
  double alpha = cfg.armijo_init;
  for (int j = 0; j <= cfg.armijo_max_backtracks; ++j) {
    IteratePoint trial = manifold::retract(displaced(pt, grad, -alpha));
    const double value = problem.evaluate(trial, false).value;
    history.push_back({alpha, value});
    if (value - value_at_pt <= -0.5 * alpha * sq_norm)
      return {alpha, std::move(trial), value, j};
    alpha *= cfg.armijo_shrink;
  }
  std::ostringstream msg;
  msg << "no sufficient decrease after " << history.size()
      << " trials (|grad|^2 = " << sq_norm << ", f = " << value_at_pt << ")";
  throw LineSearchError(msg.str(), std::move(history));
}

RunResult solve(const Problem &problem, const IteratePoint &init,
                const OptimizerConfig &cfg) {
  cfg.validate();
  RunResult res;
  IteratePoint x = init;
  Evaluation ev = problem.evaluate(x, true);
  for (;;) {
    const TangentVector grad = riemannian_gradient(problem, x, ev.gradient);
    const double gnorm = manifold::norm(grad);
    res.objective_trace.push_back(ev.value);
    res.grad_norm_trace.push_back(gnorm);
    res.constraint_trace.push_back(manifold::constraint_residual(x));
    res.tangency_trace.push_back(manifold::tangency_residual(x, grad));

    if (gnorm <= cfg.grad_tol) {
      res.converged = true;
      res.stop = StopReason::converged;
      break;
    }
    if (res.iterations_used >= cfg.max_iters) {
      res.stop = StopReason::max_iters;
      break;
    }
    try {
      ArmijoStep step = armijo_search(problem, x, ev.value, grad, cfg);
      x = std::move(step.next_point);
      res.step_trace.push_back(step.alpha);
    } catch (const LineSearchError &e) {
      res.stop = StopReason::line_search_failed;
      res.failure = e.what();
      break;
    }
    ++res.iterations_used;
    ev = problem.evaluate(x, true);
  }
  res.final_point = std::move(x);
  return res;
}

IteratePoint random_point(int m_tx, int n_streams, int n_sub, int n_irs1,
                          int n_irs2, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  IteratePoint p;
  p.w_blocks.reserve(static_cast<std::size_t>(n_sub));
  for (int k = 0; k < n_sub; ++k) {
    CMatrix w(m_tx, n_streams);
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i)
        w(i, j) = complex_normal(rng);
    p.w_blocks.push_back(std::move(w));
  }
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  p.phi1.resize(n_irs1);
  for (auto &z : p.phi1)
    z = std::polar(1.0, angle(rng));
  p.phi2.resize(n_irs2);
  for (auto &z : p.phi2)
    z = std::polar(1.0, angle(rng));
  return manifold::retract(p);
}

} // namespace coirs
