#include "survmix/simcens.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "survmix/errors.hpp"
#include "survmix/fbst.hpp"
#include "survmix/quadrature.hpp"

namespace survmix {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Pr(T > C) when C ~ Exponential(rate lambda): integrate the censoring
// density against the generator's survival function. The upper limit covers
// all but 1e-10 of the censoring mass.
double censored_probability(const Component& gen, double lambda) {
  const double upper = -std::log(1e-10) / lambda;
  auto integrand = [&gen, lambda](double c) {
    if (c <= 0.0) return 0.0;
    return lambda * std::exp(-lambda * c) * gen.survival(c);
  };
  return quad::integrate(integrand, 0.0, upper, 1e-10, 1e-13);
}

}  // namespace

double calibrate_lambda(Family generator, const Moments& m, double pc) {
  m.validate();
  if (!(pc >= 0.0) || !(pc < 1.0)) {
    throw_invalid("target censoring probability must lie in [0, 1)");
  }
  if (pc == 0.0) return 0.0;

  const Component gen(generator, m);
  double lo = 1e-12;
  double hi = 1e6 / m.mu;
  if (censored_probability(gen, lo) > pc || censored_probability(gen, hi) < pc) {
    throw_numeric("censoring rate bracket does not contain the target");
  }
  double mid = 0.0;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double achieved = censored_probability(gen, mid);
    if (std::abs(achieved - pc) <= 1e-6) return mid;
    (achieved < pc ? lo : hi) = mid;
  }
  throw_numeric("censoring rate calibration did not converge");
}

Dataset generate_sample(Family generator, const Moments& m,
                        const CensoringSpec& spec, std::size_t n, Rng& rng,
                        std::vector<Family> fit_families) {
  m.validate();
  if (n == 0) throw_invalid("sample size must be positive");
  if (spec.lambda < 0.0) throw_invalid("censoring rate must be nonnegative");

  const Component gen(generator, m);
  std::vector<Observation> obs;
  obs.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = gen.sample(rng);
    if (spec.lambda == 0.0) {
      obs.push_back({t, true});
      continue;
    }
    const double c = rng.exponential(spec.lambda);
    obs.push_back({std::min(t, c), t <= c});
  }
  return make_dataset(std::move(obs), std::move(fit_families));
}

void StudyConfig::validate() const {
  moments.validate();
  if (n < 10) throw_invalid("study sample size must be at least 10");
  if (replicates < 1) throw_invalid("study needs at least one replicate");
  if (!(pc >= 0.0) || !(pc < 1.0)) {
    throw_invalid("target censoring probability must lie in [0, 1)");
  }
  if (jobs < 1) throw_invalid("study worker count must be at least 1");
  sampler.validate();
  // Reuse the dataset rules for the fitted mixture shape.
  if (fit_families.size() < 2 || fit_families.size() > 3) {
    throw_invalid("mixture needs 2 or 3 component families");
  }
}

StudyResult run_study(const StudyConfig& cfg) {
  cfg.validate();

  StudyResult result;
  result.generator = cfg.generator;
  result.moments = cfg.moments;
  result.n = cfg.n;
  result.pc = cfg.pc;
  result.fit_families = cfg.fit_families;
  result.lambda = calibrate_lambda(cfg.generator, cfg.moments, cfg.pc);
  result.replicates.resize(static_cast<std::size_t>(cfg.replicates));

  const std::size_t m = cfg.fit_families.size();
  const CensoringSpec spec{cfg.pc, result.lambda};

  auto run_replicate = [&](std::size_t r) {
    ReplicateOutcome& out = result.replicates[r];
    out.weight_means.assign(m, kNaN);
    out.mu_mean = kNaN;
    out.sigma2_mean = kNaN;
    try {
      Rng data_rng(Rng::derive(cfg.seed, 2 * r));
      Dataset data = generate_sample(cfg.generator, cfg.moments, spec, cfg.n,
                                     data_rng, cfg.fit_families);
      SamplerConfig chain_cfg = cfg.sampler;
      chain_cfg.seed = Rng::derive(cfg.seed, 2 * r + 1);
      PosteriorDraws draws = run_chain(data, chain_cfg);

      double mu = 0.0, s2 = 0.0;
      std::vector<double> w(m, 0.0);
      for (const Draw& d : draws.draws) {
        mu += d.params.moments.mu;
        s2 += d.params.moments.sigma2;
        for (std::size_t k = 0; k < m; ++k) w[k] += d.params.weights[k];
      }
      const double inv = 1.0 / static_cast<double>(draws.draws.size());
      out.mu_mean = mu * inv;
      out.sigma2_mean = s2 * inv;
      for (std::size_t k = 0; k < m; ++k) out.weight_means[k] = w[k] * inv;

      EvidenceReport report = test_hypotheses(data, draws);
      out.decision = report.chosen;
      out.correct = out.decision.has_value() && *out.decision == cfg.generator;
    } catch (const std::exception& e) {
      out.failed = true;
      out.error = e.what();
      out.correct = false;
    }
  };

  const std::size_t total = result.replicates.size();
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), total);
  if (workers <= 1) {
    for (std::size_t r = 0; r < total; ++r) run_replicate(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next.fetch_add(1); r < total;
             r = next.fetch_add(1)) {
          run_replicate(r);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  std::size_t ok = 0, correct = 0;
  double mu = 0.0, s2 = 0.0;
  std::vector<double> w(m, 0.0);
  for (const ReplicateOutcome& out : result.replicates) {
    if (out.failed) {
      ++result.failures;
      continue;
    }
    ++ok;
    mu += out.mu_mean;
    s2 += out.sigma2_mean;
    for (std::size_t k = 0; k < m; ++k) w[k] += out.weight_means[k];
    if (out.correct) ++correct;
  }
  if (ok > 0) {
    const double inv = 1.0 / static_cast<double>(ok);
    result.mu_hat = mu * inv;
    result.sigma2_hat = s2 * inv;
    result.weight_hats.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) result.weight_hats[k] = w[k] * inv;
  } else {
    result.mu_hat = kNaN;
    result.sigma2_hat = kNaN;
    result.weight_hats.assign(m, kNaN);
  }
  result.pct_correct =
      100.0 * static_cast<double>(correct) / static_cast<double>(total);
  return result;
}

}  // namespace survmix
