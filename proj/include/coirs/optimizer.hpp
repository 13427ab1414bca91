#pragma once

#include "coirs/objective.hpp"
#include "coirs/types.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coirs {

struct OptimizerConfig {
  int max_iters = 500;
  double grad_tol = 1e-4;
  double armijo_init = 1.0;
  double armijo_shrink = 0.5;
  int armijo_max_backtracks = 50;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Which manifold factors are free. Fixed factors keep their initial value:
/// their gradient component is zeroed before projection.
struct BlockMask {
  bool w = true;
  bool phi1 = true;
  bool phi2 = true;
};

/// Objective handle consumed by the solvers. `evaluate(pt, true)` must fill
/// the Euclidean gradient in the 2 d f / d conj(z) convention.
struct Problem {
  std::function<Evaluation(const IteratePoint &, bool)> evaluate;
  BlockMask free;

  static Problem secrecy(SecrecyProblem prob, BlockMask free = {});
};

enum class StopReason { converged, max_iters, line_search_failed };

const char *to_string(StopReason r);

struct RunResult {
  std::vector<double> objective_trace; // f at every iterate, initial included
  std::vector<double> grad_norm_trace; // |grad| at every iterate
  std::vector<double> step_trace;      // accepted step sizes
  /// Post-retraction constraint residual of every iterate.
  std::vector<double> constraint_trace;
  /// Tangency residual of every Riemannian gradient.
  std::vector<double> tangency_trace;
  IteratePoint final_point;
  int iterations_used = 0;
  bool converged = false;
  StopReason stop = StopReason::max_iters;
  std::string failure; // set when stop == line_search_failed

  double final_grad_norm() const {
    return grad_norm_trace.empty() ? 0.0 : grad_norm_trace.back();
  }
};

/// One backtracking trial.
struct ArmijoTrial {
  double alpha;
  double value;
};

/// Thrown when no step in the backtracking budget gives sufficient decrease.
class LineSearchError : public std::runtime_error {
public:
  LineSearchError(const std::string &what, std::vector<ArmijoTrial> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<ArmijoTrial> &history() const { return history_; }

private:
  std::vector<ArmijoTrial> history_;
};

struct ArmijoStep {
  double alpha = 0.0;
  IteratePoint next_point;
  double next_value = 0.0;
  int backtracks = 0;
};

/// Euclidean gradient with fixed blocks zeroed, projected to the tangent
/// space at `pt`.
TangentVector riemannian_gradient(const Problem &problem,
                                  const IteratePoint &pt,
                                  const TangentVector &euclidean);
TangentVector riemannian_gradient(const Problem &problem,
                                  const IteratePoint &pt);

/// Backtracks alpha = init * shrink^j until
///   f(R(pt - alpha grad)) - f(pt) <= -(alpha / 2) |grad|^2.
ArmijoStep armijo_search(const Problem &problem, const IteratePoint &pt,
                         double value_at_pt, const TangentVector &grad,
                         const OptimizerConfig &cfg);

/// Riemannian gradient descent on the product manifold with Armijo steps.
/// Stops at |grad| <= grad_tol, after max_iters steps, or on a failed line
/// search (reported in the result, never thrown).
RunResult solve(const Problem &problem, const IteratePoint &init,
                const OptimizerConfig &cfg);

/// Random starting point: i.i.d. CN(0,1) precoders normalized to the unit
/// sphere and phases uniform on the unit circle.
IteratePoint random_point(int m_tx, int n_streams, int n_sub, int n_irs1,
                          int n_irs2, std::uint64_t seed);

} // namespace coirs
