#include "survmix/amsampler.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "survmix/errors.hpp"
#include "survmix/rng.hpp"

namespace survmix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower Cholesky factor of a small symmetric matrix (row-major). Returns
// false when the matrix is not positive definite.
bool cholesky(const std::vector<double>& a, std::size_t d,
              std::vector<double>& l) {
  l.assign(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i * d + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * d + k] * l[j * d + k];
      if (i == j) {
        if (s <= 0.0) return false;
        l[i * d + i] = std::sqrt(s);
      } else {
        l[i * d + j] = s / l[j * d + j];
      }
    }
  }
  return true;
}

// Streaming mean and covariance over every visited state (Welford update).
struct RunningCov {
  std::size_t d;
  std::size_t n = 0;
  std::vector<double> mean;
  std::vector<double> m2;  // sum of outer products of deviations
  std::vector<double> delta;

  explicit RunningCov(std::size_t dim)
      : d(dim), mean(dim, 0.0), m2(dim * dim, 0.0), delta(dim, 0.0) {}

  void add(const std::vector<double>& x) {
    ++n;
    for (std::size_t i = 0; i < d; ++i) delta[i] = x[i] - mean[i];
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < d; ++i) mean[i] += delta[i] * inv_n;
    for (std::size_t i = 0; i < d; ++i) {
      const double di = delta[i];
      for (std::size_t j = 0; j <= i; ++j) {
        const double upd = di * (x[j] - mean[j]);
        m2[i * d + j] += upd;
        if (i != j) m2[j * d + i] += upd;
      }
    }
  }

  // cov = m2 / (n - 1); caller must have n >= 2
  void covariance(std::vector<double>& out) const {
    const double inv = 1.0 / static_cast<double>(n - 1);
    out.resize(d * d);
    for (std::size_t i = 0; i < d * d; ++i) out[i] = m2[i] * inv;
  }
};

}  // namespace

void SamplerConfig::validate() const {
  if (iterations <= 0) throw_invalid("sampler iterations must be positive");
  if (burn_in < 0 || burn_in >= iterations) {
    throw_invalid("sampler burn-in must lie in [0, iterations)");
  }
  if (thin < 1) throw_invalid("sampler thinning must be at least 1");
  if (adapt_start < 1) throw_invalid("sampler adaptation start must be at least 1");
  if (!(initial_scale > 0.0) || !std::isfinite(initial_scale)) {
    throw_invalid("sampler initial scale must be positive and finite");
  }
  if (!(regularization > 0.0) || !std::isfinite(regularization)) {
    throw_invalid("sampler covariance ridge must be positive and finite");
  }
}

RawChain run_chain_raw(const RawTarget& target, std::vector<double> z0,
                       const SamplerConfig& cfg) {
  cfg.validate();
  const std::size_t d = z0.size();
  if (d == 0) throw_invalid("sampler needs at least one coordinate");

  auto [value, aux] = target(z0);
  if (!std::isfinite(value)) {
    throw_numeric(
        "target log density is not finite at the initial point; "
        "restart the chain from a different point");
  }

  Rng rng(cfg.seed);
  RunningCov stats(d);
  stats.add(z0);

  const double sd_scale = 2.4 * 2.4 / static_cast<double>(d);
  const double init_sd = std::sqrt(cfg.initial_scale);

  std::vector<double> cov(d * d, 0.0);
  std::vector<double> chol_l(d * d, 0.0);
  bool have_chol = false;

  std::vector<double> cur = std::move(z0);
  std::vector<double> prop(d), noise(d);

  RawChain chain;
  const std::size_t expect =
      static_cast<std::size_t>((cfg.iterations - 1 - cfg.burn_in) / cfg.thin) + 1;
  chain.states.reserve(expect);
  chain.values.reserve(expect);
  chain.aux.reserve(expect);

  long accepted = 0;
  for (int t = 0; t < cfg.iterations; ++t) {
    if (t >= cfg.adapt_start && stats.n >= 2) {
      stats.covariance(cov);
      for (std::size_t i = 0; i < d * d; ++i) cov[i] *= sd_scale;
      for (std::size_t i = 0; i < d; ++i) {
        cov[i * d + i] += sd_scale * cfg.regularization;
      }
      have_chol = cholesky(cov, d, chol_l);
    }

    for (std::size_t i = 0; i < d; ++i) noise[i] = rng.normal();
    if (have_chol) {
      for (std::size_t i = 0; i < d; ++i) {
        double s = cur[i];
        for (std::size_t j = 0; j <= i; ++j) s += chol_l[i * d + j] * noise[j];
        prop[i] = s;
      }
    } else {
      for (std::size_t i = 0; i < d; ++i) prop[i] = cur[i] + init_sd * noise[i];
    }

    auto [value_new, aux_new] = target(prop);
    const double log_u = std::log(rng.uniform());
    if (value_new > -kInf && log_u < value_new - value) {
      cur = prop;
      value = value_new;
      aux = aux_new;
      ++accepted;
    }
    stats.add(cur);

    if (t >= cfg.burn_in && (t - cfg.burn_in) % cfg.thin == 0) {
      chain.states.push_back(cur);
      chain.values.push_back(value);
      chain.aux.push_back(aux);
    }
  }
  chain.acceptance_rate =
      static_cast<double>(accepted) / static_cast<double>(cfg.iterations);
  return chain;
}

InitPoint initialize(const Dataset& data) {
  double sum = 0.0, sum_all = 0.0;
  std::size_t events = 0;
  for (const auto& obs : data.observations) {
    sum_all += obs.time;
    if (obs.event) {
      sum += obs.time;
      ++events;
    }
  }

  InitPoint init;
  double mu;
  if (events > 0) {
    mu = sum / static_cast<double>(events);
  } else {
    mu = sum_all / static_cast<double>(data.size());
    init.degenerate = true;
  }

  double var = 0.0;
  if (events >= 2) {
    double ss = 0.0;
    for (const auto& obs : data.observations) {
      if (obs.event) {
        const double dev = obs.time - mu;
        ss += dev * dev;
      }
    }
    var = ss / static_cast<double>(events - 1);
  }
  if (!(var > 0.0)) {
    var = mu * mu;
    init.degenerate = true;
  }

  init.moments = Moments{mu, var};
  init.moments.validate();
  return init;
}

PosteriorDraws run_chain(const Dataset& data, const SamplerConfig& cfg) {
  cfg.validate();
  data.validate();
  const std::size_t m = data.n_components();

  const InitPoint init = initialize(data);
  MixtureParams start;
  start.moments = init.moments;
  start.weights.assign(m, 1.0 / static_cast<double>(m));
  std::vector<double> z0 = to_unconstrained(start);

  auto target = [&data](std::span<const double> z) -> std::pair<double, double> {
    TransformResult tr;
    try {
      tr = from_unconstrained(z);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::numeric) return {-kInf, -kInf};
      throw;
    }
    const double lp = log_posterior(data, tr.params);
    if (lp == -kInf) return {-kInf, -kInf};
    return {lp + tr.log_jacobian, lp};
  };

  RawChain raw = run_chain_raw(target, std::move(z0), cfg);

  PosteriorDraws out;
  out.acceptance_rate = raw.acceptance_rate;
  out.acceptance_warning =
      raw.acceptance_rate < 0.05 || raw.acceptance_rate > 0.6;
  out.draws.reserve(raw.states.size());
  for (std::size_t i = 0; i < raw.states.size(); ++i) {
    TransformResult tr = from_unconstrained(raw.states[i]);
    out.draws.push_back(Draw{std::move(tr.params), raw.aux[i]});
  }
  return out;
}

}  // namespace survmix
