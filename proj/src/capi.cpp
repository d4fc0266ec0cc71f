#include "survmix.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "survmix/errors.hpp"
#include "survmix/fit.hpp"
#include "survmix/io.hpp"
#include "survmix/simcens.hpp"
#include "survmix/version.hpp"

using namespace survmix;

struct svx_dataset {
  std::vector<Observation> observations;
};

struct svx_fit {
  FitResult result;
};

struct svx_study {
  StudyResult result;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return SVX_OK;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::invalid:
        return fail(SVX_E_INVAL, e.what());
      case ErrorKind::data:
        return fail(SVX_E_DATA, e.what());
      case ErrorKind::numeric:
        return fail(SVX_E_NUMERIC, e.what());
    }
    return fail(SVX_E_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return fail(SVX_E_INTERNAL, e.what());
  } catch (...) {
    return fail(SVX_E_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Family family_from_bit(unsigned bit) {
  switch (bit) {
    case SVX_FAMILY_LOGNORMAL:
      return Family::lognormal;
    case SVX_FAMILY_GAMMA:
      return Family::gamma;
    case SVX_FAMILY_WEIBULL:
      return Family::weibull;
    default:
      throw_invalid("family must be a single SVX_FAMILY_* bit");
  }
}

unsigned bit_from_family(Family f) {
  switch (f) {
    case Family::lognormal:
      return SVX_FAMILY_LOGNORMAL;
    case Family::gamma:
      return SVX_FAMILY_GAMMA;
    case Family::weibull:
      return SVX_FAMILY_WEIBULL;
  }
  return 0;
}

std::vector<Family> families_from_mask(unsigned mask) {
  std::vector<Family> out;
  if (mask & SVX_FAMILY_LOGNORMAL) out.push_back(Family::lognormal);
  if (mask & SVX_FAMILY_GAMMA) out.push_back(Family::gamma);
  if (mask & SVX_FAMILY_WEIBULL) out.push_back(Family::weibull);
  if (mask & ~(SVX_FAMILY_LOGNORMAL | SVX_FAMILY_GAMMA | SVX_FAMILY_WEIBULL)) {
    throw_invalid("unknown family bit in mask");
  }
  return out;
}

SamplerConfig sampler_from(const svx_sampler_opts& o) {
  SamplerConfig cfg;
  cfg.iterations = static_cast<int>(o.iterations);
  cfg.burn_in = static_cast<int>(o.burn_in);
  cfg.thin = static_cast<int>(o.thin);
  cfg.adapt_start = static_cast<int>(o.adapt_start);
  cfg.initial_scale = o.initial_scale;
  cfg.regularization = o.regularization;
  cfg.seed = o.seed;
  return cfg;
}

void require(bool cond, const char* what) {
  if (!cond) throw_invalid(what);
}

}  // namespace

extern "C" {

const char* svx_version(void) { return kVersion; }

const char* svx_last_error(void) { return g_last_error.c_str(); }

void svx_string_free(char* s) { delete[] s; }

int svx_dataset_from_arrays(const double* times, const int* events, size_t n,
                            svx_dataset** out) {
  return guarded([&] {
    require(times && events && out, "null pointer argument");
    require(n > 0, "dataset must be nonempty");
    auto ds = std::make_unique<svx_dataset>();
    ds->observations.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      require(events[i] == 0 || events[i] == 1, "event indicators must be 0 or 1");
      ds->observations.push_back({times[i], events[i] == 1});
    }
    // Surface bad times now rather than at fit time.
    make_dataset(ds->observations, {Family::lognormal, Family::gamma});
    *out = ds.release();
  });
}

int svx_dataset_read_csv(const char* path, svx_dataset** out) {
  return guarded([&] {
    require(path && out, "null pointer argument");
    auto ds = std::make_unique<svx_dataset>();
    ds->observations = io::read_observations_csv(path);
    *out = ds.release();
  });
}

int svx_dataset_csv(const svx_dataset* ds, const char* manifest_ref, char** out) {
  return guarded([&] {
    require(ds && out, "null pointer argument");
    *out = copy_string(
        io::observations_csv(ds->observations, manifest_ref ? manifest_ref : ""));
  });
}

size_t svx_dataset_size(const svx_dataset* ds) {
  return ds ? ds->observations.size() : 0;
}

size_t svx_dataset_events(const svx_dataset* ds) {
  if (!ds) return 0;
  size_t n = 0;
  for (const Observation& obs : ds->observations) n += obs.event ? 1 : 0;
  return n;
}

int svx_dataset_get(const svx_dataset* ds, size_t i, double* time, int* event) {
  return guarded([&] {
    require(ds && time && event, "null pointer argument");
    require(i < ds->observations.size(), "observation index out of range");
    *time = ds->observations[i].time;
    *event = ds->observations[i].event ? 1 : 0;
  });
}

void svx_dataset_free(svx_dataset* ds) { delete ds; }

void svx_sampler_opts_default(svx_sampler_opts* opts) {
  if (!opts) return;
  const SamplerConfig cfg;
  opts->iterations = cfg.iterations;
  opts->burn_in = cfg.burn_in;
  opts->thin = cfg.thin;
  opts->adapt_start = cfg.adapt_start;
  opts->initial_scale = cfg.initial_scale;
  opts->regularization = cfg.regularization;
  opts->seed = cfg.seed;
}

int svx_calibrate_lambda(unsigned family, double mu, double sigma2, double pc,
                         double* lambda_out) {
  return guarded([&] {
    require(lambda_out != nullptr, "null pointer argument");
    *lambda_out = calibrate_lambda(family_from_bit(family), Moments{mu, sigma2}, pc);
  });
}

int svx_simulate(unsigned family, double mu, double sigma2, double pc, size_t n,
                 unsigned long long seed, svx_dataset** out, double* lambda_out) {
  return guarded([&] {
    require(out != nullptr, "null pointer argument");
    const Family gen = family_from_bit(family);
    const Moments m{mu, sigma2};
    const double lambda = calibrate_lambda(gen, m, pc);
    Rng rng(seed);
    Dataset data = generate_sample(gen, m, CensoringSpec{pc, lambda}, n, rng);
    auto ds = std::make_unique<svx_dataset>();
    ds->observations = std::move(data.observations);
    if (lambda_out) *lambda_out = lambda;
    *out = ds.release();
  });
}

void svx_fit_opts_default(svx_fit_opts* opts) {
  if (!opts) return;
  opts->families = SVX_FAMILY_LOGNORMAL | SVX_FAMILY_GAMMA | SVX_FAMILY_WEIBULL;
  svx_sampler_opts_default(&opts->sampler);
  opts->grid_points = 200;
}

int svx_fit_run(const svx_dataset* ds, const svx_fit_opts* opts, svx_fit** out) {
  return guarded([&] {
    require(ds && opts && out, "null pointer argument");
    FitConfig cfg;
    cfg.families = families_from_mask(opts->families);
    require(cfg.families.size() >= 2, "fit needs at least two families");
    cfg.sampler = sampler_from(opts->sampler);
    cfg.grid_points = opts->grid_points;
    auto fit = std::make_unique<svx_fit>();
    fit->result = run_fit(ds->observations, cfg);
    *out = fit.release();
  });
}

int svx_fit_evidence_json(const svx_fit* fit, char** out) {
  return guarded([&] {
    require(fit && out, "null pointer argument");
    *out = copy_string(io::evidence_json(fit->result));
  });
}

int svx_fit_summary_csv(const svx_fit* fit, char** out) {
  return guarded([&] {
    require(fit && out, "null pointer argument");
    *out = copy_string(
        io::posterior_summary_csv(fit->result.draws, fit->result.data.families));
  });
}

int svx_fit_curves_csv(const svx_fit* fit, char** out) {
  return guarded([&] {
    require(fit && out, "null pointer argument");
    *out = copy_string(io::curves_csv(fit->result));
  });
}

int svx_fit_draws_csv(const svx_fit* fit, char** out) {
  return guarded([&] {
    require(fit && out, "null pointer argument");
    *out = copy_string(
        io::draws_csv(fit->result.draws, fit->result.data.n_components()));
  });
}

int svx_fit_chosen_family(const svx_fit* fit, unsigned* family_out) {
  return guarded([&] {
    require(fit && family_out, "null pointer argument");
    *family_out =
        fit->result.report.chosen ? bit_from_family(*fit->result.report.chosen) : 0;
  });
}

double svx_fit_acceptance_rate(const svx_fit* fit) {
  return fit ? fit->result.draws.acceptance_rate : 0.0;
}

int svx_fit_has_pexe(const svx_fit* fit) {
  return fit && fit->result.pexe ? 1 : 0;
}

void svx_fit_free(svx_fit* fit) { delete fit; }

void svx_study_opts_default(svx_study_opts* opts) {
  if (!opts) return;
  const StudyConfig cfg;
  opts->generator = bit_from_family(cfg.generator);
  opts->mu = cfg.moments.mu;
  opts->sigma2 = cfg.moments.sigma2;
  opts->pc = cfg.pc;
  opts->n = cfg.n;
  opts->replicates = cfg.replicates;
  opts->jobs = cfg.jobs;
  opts->seed = cfg.seed;
  svx_sampler_opts_default(&opts->sampler);
}

int svx_study_run(const svx_study_opts* opts, svx_study** out) {
  return guarded([&] {
    require(opts && out, "null pointer argument");
    StudyConfig cfg;
    cfg.generator = family_from_bit(opts->generator);
    cfg.moments = Moments{opts->mu, opts->sigma2};
    cfg.n = opts->n;
    cfg.replicates = opts->replicates;
    cfg.pc = opts->pc;
    cfg.sampler = sampler_from(opts->sampler);
    cfg.seed = opts->seed;
    cfg.jobs = opts->jobs;
    auto study = std::make_unique<svx_study>();
    study->result = run_study(cfg);
    *out = study.release();
  });
}

int svx_study_csv(const svx_study* study, char** out) {
  return guarded([&] {
    require(study && out, "null pointer argument");
    *out = copy_string(io::study_csv(study->result));
  });
}

size_t svx_study_failures(const svx_study* study) {
  return study ? study->result.failures : 0;
}

double svx_study_lambda(const svx_study* study) {
  return study ? study->result.lambda : 0.0;
}

double svx_study_pct_correct(const svx_study* study) {
  return study ? study->result.pct_correct : 0.0;
}

void svx_study_free(svx_study* study) { delete study; }

}  // extern "C"
