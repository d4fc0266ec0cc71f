#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "survmix/optim.hpp"
#include "survmix/quadrature.hpp"

using namespace survmix;

TEST_CASE("recovers the maximum of a quadratic") {
  // f(x) = -(x - a)' A (x - a) with a known positive definite A
  const std::vector<double> a = {1.5, -2.0, 0.25};
  const auto f = [&](std::span<const double> x) {
    const double d0 = x[0] - a[0], d1 = x[1] - a[1], d2 = x[2] - a[2];
    return -(3.0 * d0 * d0 + 1.0 * d1 * d1 + 0.5 * d2 * d2 + 0.8 * d0 * d1 -
             0.3 * d1 * d2);
  };
  const auto res = maximize(f, {0.0, 0.0, 0.0});
  CHECK(res.converged);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(res.argmax[i] == doctest::Approx(a[i]).epsilon(1e-5));
  }
  CHECK(res.value == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("handles a non-quadratic log-concave objective") {
  // f(x, y) = -x^4 - (y - 2)^2 peaks at (0, 2); the quartic valley is flat
  // so progress along x is slow and needs a generous iteration budget
  const auto f = [](std::span<const double> x) {
    return -std::pow(x[0], 4) - (x[1] - 2.0) * (x[1] - 2.0);
  };
  OptimOptions opts;
  opts.max_iterations = 4000;
  const auto res = maximize(f, {1.3, -1.0}, opts);
  CHECK(std::abs(res.argmax[0]) < 1e-2);
  CHECK(res.argmax[1] == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(res.value > -1e-6);
}

TEST_CASE("respects a restricted support") {
  // log of a gaussian truncated to x > 0; -inf outside
  const auto f = [](std::span<const double> x) {
    if (x[0] <= 0.0) return -std::numeric_limits<double>::infinity();
    return -0.5 * (x[0] - 0.4) * (x[0] - 0.4) / 0.01;
  };
  const auto res = maximize(f, {0.05});
  CHECK(res.argmax[0] == doctest::Approx(0.4).epsilon(1e-4));
  CHECK(std::isfinite(res.value));
}

TEST_CASE("never returns less than the starting value") {
  const auto f = [](std::span<const double> x) {
    // nasty ridge: flat plateau with a spike at the start
    return x[0] == 1.0 ? 5.0 : std::min(4.0, -std::abs(x[0]));
  };
  const auto res = maximize(f, {1.0});
  CHECK(res.value >= 5.0);
}

TEST_CASE("fifteen-point rule integrates high-degree polynomials exactly") {
  // exact through degree 29
  const double got = quad::gauss_legendre_15(
      [](double x) { return std::pow(x, 29.0); }, 0.0, 1.0);
  CHECK(got == doctest::Approx(1.0 / 30.0).epsilon(1e-13));
  const double odd = quad::gauss_legendre_15(
      [](double x) { return std::pow(x, 17.0); }, -1.0, 1.0);
  CHECK(std::abs(odd) < 1e-15);
}

TEST_CASE("adaptive integration hits known values") {
  CHECK(quad::integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(quad::integrate([](double x) { return std::exp(-x); }, 0.0, 40.0) ==
        doctest::Approx(1.0 - std::exp(-40.0)).epsilon(1e-12));
  // oscillatory integrand over a full period is zero (absolute tolerance)
  const double zero = quad::integrate([](double x) { return std::sin(x); },
                                      0.0, 2.0 * std::numbers::pi, 1e-10, 1e-13);
  CHECK(std::abs(zero) < 1e-10);
  // sharply peaked integrand forces recursion
  const double peak = quad::integrate(
      [](double x) { return std::exp(-500.0 * (x - 0.3) * (x - 0.3)); }, 0.0,
      1.0, 1e-12);
  CHECK(peak ==
        doctest::Approx(std::sqrt(std::numbers::pi / 500.0)).epsilon(1e-9));
}
