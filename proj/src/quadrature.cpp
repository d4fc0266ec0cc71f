#include "survmix/quadrature.hpp"

#include <array>
#include <cmath>

#include "survmix/errors.hpp"

namespace survmix::quad {

namespace {

constexpr int kPoints = 15;

struct Rule {
  std::array<double, kPoints> node;    // on [-1, 1]
  std::array<double, kPoints> weight;
};

// Legendre P_n and its derivative via the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk =
        ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

Rule build_rule() {
  Rule r;
  for (int i = 0; i < kPoints; ++i) {
    // Chebyshev-flavored first guess, then Newton.
    double x = std::cos(M_PI * (i + 0.75) / (kPoints + 0.5));
    double p = 0.0, dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      legendre(kPoints, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre(kPoints, x, p, dp);
    r.node[i] = x;
    r.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const Rule& rule() {
  static const Rule r = build_rule();
  return r;
}

double panel(const Integrand& f, double a, double b) {
  const Rule& r = rule();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    acc += r.weight[i] * f(mid + half * r.node[i]);
  }
  return half * acc;
}

double adapt(const Integrand& f, double a, double b, double whole, double tol,
             int depth) {
  const double mid = 0.5 * (a + b);
  const double left = panel(f, a, mid);
  const double right = panel(f, mid, b);
  const double refined = left + right;
  if (depth <= 0 || std::abs(refined - whole) <= tol) return refined;
  return adapt(f, a, mid, left, 0.5 * tol, depth - 1) +
         adapt(f, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

double gauss_legendre_15(const Integrand& f, double a, double b) {
  return panel(f, a, b);
}

double integrate(const Integrand& f, double a, double b, double rel_tol,
                 double abs_tol, int max_depth) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw_invalid("integration limits must be finite");
  }
  if (a == b) return 0.0;
  const double whole = panel(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * std::abs(whole));
  return adapt(f, a, b, whole, tol, max_depth);
}

}  // namespace survmix::quad
