#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "survmix/mixture.hpp"

namespace survmix {

struct SamplerConfig {
  int iterations = 60000;     // total Metropolis steps
  int burn_in = 10000;        // discarded prefix
  int thin = 10;              // keep every thin-th post-burn-in state
  int adapt_start = 1000;     // steps before the empirical covariance kicks in
  double initial_scale = 0.01;    // isotropic proposal variance until then
  double regularization = 1e-6;   // ridge added to the adapted covariance
  std::uint64_t seed = 0;

  void validate() const;
};

// Target callback: returns the unnormalized log density in the sampled
// coordinates together with an auxiliary value recorded per retained draw.
using RawTarget =
    std::function<std::pair<double, double>(std::span<const double>)>;

struct RawChain {
  std::vector<std::vector<double>> states;
  std::vector<double> values;  // target log density at each retained state
  std::vector<double> aux;     // auxiliary channel at each retained state
  double acceptance_rate = 0.0;
};

// Adaptive Metropolis random walk (Haario et al. style): after adapt_start
// steps the proposal covariance tracks (2.4^2/d) * (empirical cov + ridge).
// Throws a numeric error if the target is not finite at z0; callers should
// retry from a different starting point in that case.
RawChain run_chain_raw(const RawTarget& target, std::vector<double> z0,
                       const SamplerConfig& cfg);

struct Draw {
  MixtureParams params;
  double log_post = 0.0;  // unnormalized log posterior in model coordinates
};

struct PosteriorDraws {
  std::vector<Draw> draws;
  double acceptance_rate = 0.0;
  bool acceptance_warning = false;  // rate outside the (0.05, 0.6) comfort band
};

struct InitPoint {
  Moments moments;
  bool degenerate = false;  // too few events for a sample variance
};

// Moment-matching start: mean and variance of the uncensored times, falling
// back to all times (and then to mu^2 for the variance) when events are scarce.
InitPoint initialize(const Dataset& data);

// Samples the mixture posterior for the given dataset. The chain runs in the
// unconstrained parametrization and retained draws are mapped back.
PosteriorDraws run_chain(const Dataset& data, const SamplerConfig& cfg);

}  // namespace survmix
