#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace survmix {

using ObjectiveFn = std::function<double(std::span<const double>)>;

struct OptimOptions {
  int max_iterations = 200;
  double grad_tol = 1e-8;       // infinity norm of the numeric gradient
  double step_tol = 1e-12;      // line search step below this twice -> stop
  double fd_step_rel = 1e-5;    // central difference h = rel * max(|x|, 1)
  double armijo_c1 = 1e-4;
  int max_halvings = 60;
};

struct OptimResult {
  std::vector<double> argmax;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
  std::string note;
};

// Polak-Ribiere nonlinear conjugate gradient ascent with central-difference
// gradients and Armijo backtracking. The objective may return -inf outside
// its support; such trial points are simply rejected by the line search.
// The returned value is never below f(x0).
OptimResult maximize(const ObjectiveFn& f, std::vector<double> x0,
                     const OptimOptions& opts = {});

}  // namespace survmix
