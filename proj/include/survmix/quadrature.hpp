#pragma once

#include <functional>

namespace survmix::quad {

using Integrand = std::function<double(double)>;

// 15-point Gauss-Legendre rule on [a, b]. Nodes and weights are computed
// once per process by Newton iteration on the Legendre recurrence.
double gauss_legendre_15(const Integrand& f, double a, double b);

// Adaptive panel bisection driven by the 15-point rule: a panel is accepted
// when splitting it changes the estimate by less than the tolerance budget
// assigned to it.
double integrate(const Integrand& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 1e-13, int max_depth = 48);

}  // namespace survmix::quad
