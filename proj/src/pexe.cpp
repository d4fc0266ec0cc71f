#include "survmix/pexe.hpp"

#include <algorithm>
#include <cmath>

#include "survmix/errors.hpp"

namespace survmix {

PexeFit fit_pexe(const Dataset& data) {
  if (data.observations.empty()) throw_invalid("dataset must be nonempty");

  std::vector<double> deaths;
  for (const Observation& obs : data.observations) {
    if (obs.event) deaths.push_back(obs.time);
  }
  if (deaths.empty()) {
    throw_data("piecewise exponential fit needs at least one uncensored observation");
  }
  std::sort(deaths.begin(), deaths.end());

  PexeFit fit;
  std::vector<std::size_t> counts;
  for (double t : deaths) {
    if (fit.breakpoints.empty() || fit.breakpoints.back() != t) {
      fit.breakpoints.push_back(t);
      counts.push_back(1);
    } else {
      ++counts.back();
    }
  }

  const std::size_t k = fit.breakpoints.size();
  fit.rates.resize(k);
  fit.cum_hazard.resize(k);
  double prev = 0.0;
  double h = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double ti = fit.breakpoints[i];
    // Total time at risk inside (prev, ti]: every subject contributes its
    // sojourn through the interval, censored ones up to their exit.
    double ttt = 0.0;
    for (const Observation& obs : data.observations) {
      ttt += std::max(0.0, std::min(obs.time, ti) - prev);
    }
    fit.rates[i] = static_cast<double>(counts[i]) / ttt;
    h += fit.rates[i] * (ti - prev);
    fit.cum_hazard[i] = h;
    prev = ti;
  }
  fit.support_end = fit.breakpoints.back();
  return fit;
}

double PexeFit::survival_at(double t, bool* extrapolated) const {
  if (extrapolated) *extrapolated = false;
  if (!(t >= 0.0)) throw_invalid("survival evaluation time must be nonnegative");
  if (t == 0.0) return 1.0;

  const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), t);
  if (it == breakpoints.end()) {
    if (extrapolated) *extrapolated = true;
    const double h = cum_hazard.back() + rates.back() * (t - support_end);
    return std::exp(-h);
  }
  const std::size_t i = static_cast<std::size_t>(it - breakpoints.begin());
  const double prev_t = i == 0 ? 0.0 : breakpoints[i - 1];
  const double prev_h = i == 0 ? 0.0 : cum_hazard[i - 1];
  return std::exp(-(prev_h + rates[i] * (t - prev_t)));
}

}  // namespace survmix
