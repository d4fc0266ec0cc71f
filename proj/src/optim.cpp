#include "survmix/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace survmix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double eval(const ObjectiveFn& f, std::span<const double> x) {
  double v = f(x);
  return std::isnan(v) ? -kInf : v;
}

// Central differences, falling back to a one-sided stencil when a trial
// point leaves the support of the objective.
void gradient(const ObjectiveFn& f, std::vector<double>& x, double fx,
              double rel, std::vector<double>& g) {
  const std::size_t d = x.size();
  for (std::size_t i = 0; i < d; ++i) {
    const double xi = x[i];
    const double h = rel * std::max(std::abs(xi), 1.0);
    x[i] = xi + h;
    const double fp = eval(f, x);
    x[i] = xi - h;
    const double fm = eval(f, x);
    x[i] = xi;
    if (std::isfinite(fp) && std::isfinite(fm)) {
      g[i] = (fp - fm) / (2.0 * h);
    } else if (std::isfinite(fp)) {
      g[i] = (fp - fx) / h;
    } else if (std::isfinite(fm)) {
      g[i] = (fx - fm) / h;
    } else {
      g[i] = 0.0;
    }
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

OptimResult maximize(const ObjectiveFn& f, std::vector<double> x0,
                     const OptimOptions& opts) {
  OptimResult res;
  const std::size_t d = x0.size();
  std::vector<double> x = std::move(x0);
  double fx = eval(f, x);
  if (!std::isfinite(fx)) {
    res.argmax = std::move(x);
    res.value = fx;
    res.note = "objective not finite at the starting point";
    return res;
  }

  std::vector<double> g(d), g_prev(d), dir(d), trial(d);
  gradient(f, x, fx, opts.fd_step_rel, g);
  dir = g;

  double alpha_seed = 1.0;
  int tiny_steps = 0;

  for (int it = 0; it < opts.max_iterations; ++it) {
    res.iterations = it + 1;
    if (inf_norm(g) < opts.grad_tol) {
      res.converged = true;
      break;
    }

    double slope = dot(g, dir);
    if (slope <= 0.0) {  // not an ascent direction, restart along the gradient
      dir = g;
      slope = dot(g, g);
      if (slope <= 0.0) {
        res.converged = true;
        break;
      }
    }

    // Armijo backtracking from an adaptive initial step.
    double alpha = alpha_seed;
    double f_new = -kInf;
    bool accepted = false;
    for (int half = 0; half < opts.max_halvings; ++half) {
      for (std::size_t i = 0; i < d; ++i) trial[i] = x[i] + alpha * dir[i];
      f_new = eval(f, trial);
      if (std::isfinite(f_new) && f_new >= fx + opts.armijo_c1 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      res.line_search_failed = true;
      res.note = "line search could not improve the objective";
      break;
    }

    double step_norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      step_norm = std::max(step_norm, std::abs(alpha * dir[i]));
    }
    x.swap(trial);
    fx = f_new;
    alpha_seed = std::clamp(alpha * 2.0, 1e-10, 1e4);

    if (step_norm < opts.step_tol) {
      if (++tiny_steps >= 2) {
        res.converged = true;
        break;
      }
    } else {
      tiny_steps = 0;
    }

    g_prev.swap(g);
    gradient(f, x, fx, opts.fd_step_rel, g);

    // Polak-Ribiere with automatic restart (beta clipped at zero).
    double denom = dot(g_prev, g_prev);
    double beta = 0.0;
    if (denom > 0.0) {
      double num = dot(g, g) - dot(g, g_prev);
      beta = std::max(0.0, num / denom);
    }
    for (std::size_t i = 0; i < d; ++i) dir[i] = g[i] + beta * dir[i];
  }

  res.argmax = std::move(x);
  res.value = fx;
  return res;
}

}  // namespace survmix
