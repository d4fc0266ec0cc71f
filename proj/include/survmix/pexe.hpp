#pragma once

#include <vector>

#include "survmix/mixture.hpp"

namespace survmix {

// Piecewise exponential survival estimate: constant hazard on the intervals
// between consecutive distinct event times, each rate being deaths over the
// total time at risk accumulated inside the interval.
struct PexeFit {
  std::vector<double> breakpoints;  // distinct event times, ascending
  std::vector<double> rates;        // hazard on (breakpoints[i-1], breakpoints[i]]
  std::vector<double> cum_hazard;   // cumulative hazard at each breakpoint
  double support_end = 0.0;         // last event time

  // Continuous and nonincreasing, S(0) = 1. Beyond the last event time the
  // final rate is carried forward; *extrapolated reports when that happens.
  double survival_at(double t, bool* extrapolated = nullptr) const;
};

// Requires at least one uncensored observation.
PexeFit fit_pexe(const Dataset& data);

}  // namespace survmix
