#include "survmix/fit.hpp"

#include "survmix/errors.hpp"

namespace survmix {

FitResult run_fit(std::vector<Observation> observations, const FitConfig& cfg) {
  cfg.sampler.validate();
  if (cfg.grid_points < 2) throw_invalid("curve grid needs at least 2 points");

  FitResult res;
  res.config = cfg;
  res.data = make_dataset(std::move(observations), cfg.families);
  res.draws = run_chain(res.data, cfg.sampler);
  res.report = test_hypotheses(res.data, res.draws);
  try {
    res.pexe = fit_pexe(res.data);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::data) throw;
    // all observations censored: parametric results stand on their own
  }
  return res;
}

}  // namespace survmix
