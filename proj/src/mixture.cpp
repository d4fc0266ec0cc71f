#include "survmix/mixture.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "survmix/errors.hpp"
#include "survmix/specfun.hpp"

namespace survmix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWeightClamp = 1e-12;  // boundary clamp before logit
constexpr double kPriorShape = 0.01;
constexpr double kPriorScale = 100.0;

double log_sum_exp(std::span<const double> terms) {
  double max_term = -kInf;
  for (double t : terms) max_term = std::max(max_term, t);
  if (!std::isfinite(max_term)) return max_term;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - max_term);
  return max_term + std::log(acc);
}

double inv_logit(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_gamma_prior(double x) {
  return (kPriorShape - 1.0) * std::log(x) - x / kPriorScale -
         specfun::log_gamma(kPriorShape) - kPriorShape * std::log(kPriorScale);
}

}  // namespace

void Dataset::validate() const {
  if (observations.empty()) throw_invalid("dataset must be nonempty");
  const std::size_t m = families.size();
  if (m < 2 || m > 3) throw_invalid("mixture needs 2 or 3 component families");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (families[i] == families[j]) {
        throw_invalid("component families must be distinct");
      }
    }
  }
  log_times.resize(observations.size());
  for (std::size_t j = 0; j < observations.size(); ++j) {
    const auto& obs = observations[j];
    if (!(obs.time > 0.0) || !std::isfinite(obs.time)) {
      throw_invalid("observation times must be finite and > 0 (index " +
                    std::to_string(j) + ")");
    }
    log_times[j] = std::log(obs.time);
  }
}

Dataset make_dataset(std::vector<Observation> observations,
                     std::vector<Family> families) {
  Dataset d;
  d.observations = std::move(observations);
  d.families = std::move(families);
  d.validate();
  return d;
}

void MixtureParams::validate(std::size_t n_components) const {
  moments.validate();
  if (weights.size() != n_components) {
    throw_invalid("weight vector size does not match component count");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !(w <= 1.0)) throw_invalid("weights must lie in [0,1]");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "weights must sum to 1 (got " << sum << ")";
    throw_invalid(msg.str());
  }
}

double log_likelihood(const Dataset& data, const MixtureParams& theta) {
  const std::size_t m = data.n_components();
  theta.validate(m);

  std::array<std::optional<Component>, 3> comp;
  std::array<double, 3> log_w{};
  for (std::size_t k = 0; k < m; ++k) {
    if (theta.weights[k] > 0.0) {
      try {
        comp[k].emplace(data.families[k], theta.moments);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::numeric) return -kInf;  // out of support
        throw;
      }
      log_w[k] = std::log(theta.weights[k]);
    }
  }

  double total = 0.0;
  std::array<double, 3> terms{};
  try {
    for (std::size_t j = 0; j < data.observations.size(); ++j) {
      const auto& obs = data.observations[j];
      const double log_t = data.log_times[j];
      std::size_t cnt = 0;
      for (std::size_t k = 0; k < m; ++k) {
        if (!comp[k]) continue;
        const double part = obs.event ? comp[k]->log_pdf(obs.time, log_t)
                                      : std::log(comp[k]->survival(obs.time));
        terms[cnt++] = log_w[k] + part;
      }
      total += log_sum_exp(std::span<const double>(terms.data(), cnt));
      if (total == -kInf) return -kInf;
    }
  } catch (const Error& e) {
    // numerically intractable parameter points are treated as out of support
    if (e.kind() == ErrorKind::numeric) return -kInf;
    throw;
  }
  return total;
}

double log_prior(const MixtureParams& theta) {
  const std::size_t m = theta.weights.size();
  // Flat Dirichlet(1,...,1) has constant density (m-1)! on the closed simplex.
  return log_gamma_prior(theta.moments.mu) + log_gamma_prior(theta.moments.sigma2) +
         specfun::log_gamma(static_cast<double>(m));
}

double log_posterior(const Dataset& data, const MixtureParams& theta) {
  const double ll = log_likelihood(data, theta);
  if (ll == -kInf) return -kInf;
  return ll + log_prior(theta);
}

std::vector<double> to_unconstrained(const MixtureParams& theta) {
  const std::size_t m = theta.weights.size();
  theta.validate(m);

  std::vector<double> p = theta.weights;
  double sum = 0.0;
  for (auto& w : p) {
    w = std::clamp(w, kWeightClamp, 1.0);
    sum += w;
  }
  for (auto& w : p) w /= sum;

  std::vector<double> z;
  z.reserve(2 + m - 1);
  z.push_back(std::log(theta.moments.mu));
  z.push_back(std::log(theta.moments.sigma2));
  double remaining = 1.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double v = std::clamp(p[k] / remaining, kWeightClamp, 1.0 - kWeightClamp);
    const double shift = std::log(static_cast<double>(m - 1 - k));
    z.push_back(std::log(v / (1.0 - v)) + shift);
    remaining -= p[k];
  }
  return z;
}

TransformResult from_unconstrained(std::span<const double> z) {
  if (z.size() < 3 || z.size() > 4) {
    throw_invalid("unconstrained point must have dimension 3 or 4");
  }
  for (double v : z) {
    if (!std::isfinite(v)) throw_invalid("unconstrained point must be finite");
  }
  const std::size_t m = z.size() - 1;

  TransformResult out;
  out.params.moments.mu = std::exp(z[0]);
  out.params.moments.sigma2 = std::exp(z[1]);
  if (!std::isfinite(out.params.moments.mu) ||
      !std::isfinite(out.params.moments.sigma2) ||
      out.params.moments.mu <= 0.0 || out.params.moments.sigma2 <= 0.0) {
    throw_numeric("unconstrained point maps outside the representable range");
  }
  out.log_jacobian = z[0] + z[1];

  out.params.weights.assign(m, 0.0);
  double remaining = 1.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double shift = std::log(static_cast<double>(m - 1 - k));
    const double v = inv_logit(z[2 + k] - shift);
    out.params.weights[k] = remaining * v;
    out.log_jacobian +=
        std::log(remaining) + std::log(v) + std::log1p(-v);
    remaining -= out.params.weights[k];
  }
  out.params.weights[m - 1] = std::max(remaining, 0.0);
  return out;
}

}  // namespace survmix
