#pragma once

#include <optional>
#include <vector>

#include "survmix/amsampler.hpp"
#include "survmix/fbst.hpp"
#include "survmix/mixture.hpp"
#include "survmix/pexe.hpp"

namespace survmix {

struct FitConfig {
  std::vector<Family> families = {Family::lognormal, Family::gamma,
                                  Family::weibull};
  SamplerConfig sampler;
  int grid_points = 200;  // survival-curve grid resolution
};

struct FitResult {
  Dataset data;
  FitConfig config;
  PosteriorDraws draws;
  EvidenceReport report;
  // Absent when the data carry no uncensored observation.
  std::optional<PexeFit> pexe;
};

// Full workflow: sample the posterior, test the weight hypotheses, and fit
// the nonparametric reference curve (skipped, not fatal, on all-censored
// data).
FitResult run_fit(std::vector<Observation> observations, const FitConfig& cfg);

}  // namespace survmix
