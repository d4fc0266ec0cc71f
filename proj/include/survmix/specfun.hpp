#pragma once

namespace survmix::specfun {

// log Gamma(x) for x > 0. Thread safe (does not touch signgam).
double log_gamma(double x);

// Digamma (psi) function for x > 0.
double digamma(double x);

// Regularized incomplete gamma functions, P(a,x) + Q(a,x) = 1.
// Series expansion for x < a+1, continued fraction otherwise; target
// relative error ~1e-14.
double reg_gamma_lower(double a, double x);
double reg_gamma_upper(double a, double x);

// Standard normal CDF and complementary CDF via erfc (accurate in both
// tails, no 1-x cancellation).
double normal_cdf(double z);
double normal_ccdf(double z);

}  // namespace survmix::specfun
