#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "survmix/amsampler.hpp"
#include "survmix/mixture.hpp"
#include "survmix/rng.hpp"
#include "survmix/survdist.hpp"

namespace survmix {

// Exponential censoring-time distribution calibrated so that a fraction pc
// of observations is censored in expectation.
struct CensoringSpec {
  double pc = 0.0;      // target censoring probability, in [0, 1)
  double lambda = 0.0;  // exponential rate of the censoring times
};

// Solves Pr(T > C) = pc for the censoring rate by bisection; the survival
// probability integral uses adaptive quadrature over the censoring-time
// range. pc = 0 maps to rate 0 (no censoring ever).
double calibrate_lambda(Family generator, const Moments& m, double pc);

// Draws n pairs (T, C) and records (min(T, C), indicator(T <= C)). For each
// observation T is drawn first, then C; with rate 0 no censoring draw is
// consumed at all. fit_families defines the mixture the dataset will be
// fitted with, not the generator.
Dataset generate_sample(Family generator, const Moments& m,
                        const CensoringSpec& spec, std::size_t n, Rng& rng,
                        std::vector<Family> fit_families = {
                            Family::lognormal, Family::gamma, Family::weibull});

struct StudyConfig {
  Family generator = Family::lognormal;
  Moments moments{20.0, 50.0};
  std::size_t n = 300;
  int replicates = 20;
  double pc = 0.1;
  SamplerConfig sampler;  // per-replicate seeds are derived from `seed`
  std::uint64_t seed = 0;
  int jobs = 1;
  std::vector<Family> fit_families = {Family::lognormal, Family::gamma,
                                      Family::weibull};

  void validate() const;
};

struct ReplicateOutcome {
  bool failed = false;
  std::string error;                   // set when failed
  std::optional<Family> decision;      // nullopt means undecided
  bool correct = false;
  double mu_mean = 0.0;
  double sigma2_mean = 0.0;
  std::vector<double> weight_means;    // fit_families order
};

struct StudyResult {
  Family generator;
  Moments moments;
  std::size_t n = 0;
  double pc = 0.0;
  double lambda = 0.0;  // calibrated once for the whole study
  std::vector<Family> fit_families;

  // Means over the replicates that completed; NaN if none did.
  double mu_hat = 0.0;
  double sigma2_hat = 0.0;
  std::vector<double> weight_hats;

  double pct_correct = 0.0;  // undecided and failed replicates count as wrong
  std::size_t failures = 0;
  std::vector<ReplicateOutcome> replicates;
};

// Replicated generate-fit-decide experiment. Replicate r derives its data
// and chain seeds from (cfg.seed, r), so results do not depend on cfg.jobs.
StudyResult run_study(const StudyConfig& cfg);

}  // namespace survmix
