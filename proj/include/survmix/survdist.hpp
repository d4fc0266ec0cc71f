#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "survmix/rng.hpp"

namespace survmix {

enum class Family { lognormal, gamma, weibull };

std::string family_name(Family f);
Family parse_family(const std::string& name);  // throws Error(invalid)

// Population mean and variance shared by all mixture components.
struct Moments {
  double mu = 0.0;
  double sigma2 = 0.0;

  void validate() const;  // finite and strictly positive
};

struct LognormalParams {
  double meanlog = 0.0;  // mean of log(T)
  double varlog = 0.0;   // variance of log(T), > 0
};

struct GammaParams {
  double scale = 0.0;
  double shape = 0.0;
};

struct WeibullParams {
  double scale = 0.0;
  double shape = 0.0;
};

// Moment-matching conversions. Each family's natural parameters are written
// as functions of (mu, sigma2) so that all families share the same mean and
// variance.
LognormalParams lognormal_from_moments(const Moments& m);
GammaParams gamma_from_moments(const Moments& m);

// Solves for the Weibull shape on the bracket [0.05, 700] with a safeguarded
// Newton iteration (bisection fallback); the residual of the shape equation
// at the returned value is <= 1e-10. Throws Error(numeric) when the target
// coefficient of variation is not representable on the bracket.
WeibullParams weibull_from_moments(const Moments& m);

// Residual of the Weibull shape equation at a trial shape; exposed so the
// solver can be checked externally.
double weibull_shape_residual(const Moments& m, double shape);

// One component distribution with parameters fixed by (family, moments).
// Conversion happens once at construction; evaluations are cheap.
class Component {
 public:
  Component(Family f, const Moments& m);

  Family family() const { return family_; }

  double log_pdf(double t) const;
  // Hot-path variant for callers that already have log(t).
  double log_pdf(double t, double log_t) const;
  double survival(double t) const;
  double cdf(double t) const;
  double hazard(double t) const;
  double sample(Rng& rng) const;

 private:
  Family family_;
  // Converted natural parameters; meaning depends on the family.
  double scale_ = 0.0;    // gamma/weibull scale
  double shape_ = 0.0;    // gamma/weibull shape
  double meanlog_ = 0.0;  // lognormal
  double varlog_ = 0.0;   // lognormal
  // Precomputed constants for the log density.
  double log_norm_ = 0.0;
  double log_scale_ = 0.0;
};

// Convenience one-shot forms.
double log_pdf(Family f, const Moments& m, double t);
double survival(Family f, const Moments& m, double t);
double hazard(Family f, const Moments& m, double t);
std::vector<double> sample(Family f, const Moments& m, Rng& rng, std::size_t n);

}  // namespace survmix
