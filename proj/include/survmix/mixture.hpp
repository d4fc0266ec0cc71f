#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "survmix/survdist.hpp"

namespace survmix {

// One right-censored observation: the time is the event time when event is
// true, otherwise a lower bound on it.
struct Observation {
  double time = 0.0;
  bool event = true;
};

struct Dataset {
  std::vector<Observation> observations;
  std::vector<Family> families;  // component order of the mixture

  // Cached log(time) per observation; (re)filled by validate().
  mutable std::vector<double> log_times;

  void validate() const;
  std::size_t size() const { return observations.size(); }
  std::size_t n_components() const { return families.size(); }
};

Dataset make_dataset(std::vector<Observation> observations,
                     std::vector<Family> families);

// Full parameter point of the mixture: shared moments plus simplex weights
// ordered like Dataset::families.
struct MixtureParams {
  Moments moments;
  std::vector<double> weights;

  void validate(std::size_t n_components) const;
};

// Censored mixture log likelihood. Component sums use log-sum-exp; an
// observation whose every active component underflows contributes -inf
// (the function never throws for that). Moments whose Weibull shape is not
// representable are treated as zero likelihood when the Weibull weight is
// positive.
double log_likelihood(const Dataset& data, const MixtureParams& theta);

// Independent gamma priors on mu and sigma2 (mean 1, variance 100) plus a
// flat Dirichlet prior on the weights (Beta(1,1) for two components).
double log_prior(const MixtureParams& theta);

// Unnormalized log posterior, log_likelihood + log_prior. This is the
// density all evidence computations compare.
double log_posterior(const Dataset& data, const MixtureParams& theta);

// Bijection between the constrained parameter space and an unconstrained
// working space of dimension 2 + (m-1): (log mu, log sigma2, stick-breaking
// logits of the weights). The logits carry the centering shift that maps the
// zero vector to the uniform simplex point.
struct TransformResult {
  MixtureParams params;
  double log_jacobian;  // log |d theta / d z|
};

std::vector<double> to_unconstrained(const MixtureParams& theta);
TransformResult from_unconstrained(std::span<const double> z);

}  // namespace survmix
