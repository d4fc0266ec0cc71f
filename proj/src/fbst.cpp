#include "survmix/fbst.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "survmix/errors.hpp"

namespace survmix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Coordinate chart of a hypothesis manifold inside the full parameter space.
class Manifold {
 public:
  Manifold(const Dataset& data, const SharpHypothesis& h)
      : h_(h), m_(data.n_components()) {
    if (h.kind != HypothesisKind::full_space && h.component >= m_) {
      throw_invalid("hypothesis component index out of range");
    }
  }

  std::size_t dim() const {
    switch (h_.kind) {
      case HypothesisKind::full_space:
        return 2 + (m_ - 1);
      case HypothesisKind::weight_is_one:
        return 2;
      case HypothesisKind::weight_is_zero:
        return 2 + (m_ - 2);
    }
    return 0;
  }

  // Full parameter point for manifold coordinates. Throws a numeric error
  // when the coordinates map outside the representable range.
  MixtureParams lift(std::span<const double> x) const {
    switch (h_.kind) {
      case HypothesisKind::full_space:
        return from_unconstrained(x).params;
      case HypothesisKind::weight_is_one: {
        MixtureParams theta;
        theta.moments = moments_from(x);
        theta.weights.assign(m_, 0.0);
        theta.weights[h_.component] = 1.0;
        return theta;
      }
      case HypothesisKind::weight_is_zero: {
        MixtureParams theta;
        if (m_ == 2) {
          theta.moments = moments_from(x);
          theta.weights.assign(2, 0.0);
          theta.weights[1 - h_.component] = 1.0;
          return theta;
        }
        // Reduced simplex over the remaining components.
        TransformResult tr = from_unconstrained(x);
        theta.moments = tr.params.moments;
        theta.weights.assign(m_, 0.0);
        std::size_t pos = 0;
        for (std::size_t k = 0; k < m_; ++k) {
          if (k != h_.component) theta.weights[k] = tr.params.weights[pos++];
        }
        return theta;
      }
    }
    throw_invalid("unknown hypothesis kind");
  }

  // Nearest manifold coordinates for a posterior draw.
  std::vector<double> project(const MixtureParams& theta) const {
    switch (h_.kind) {
      case HypothesisKind::full_space:
        return to_unconstrained(theta);
      case HypothesisKind::weight_is_one:
        return {std::log(theta.moments.mu), std::log(theta.moments.sigma2)};
      case HypothesisKind::weight_is_zero: {
        if (m_ == 2) {
          return {std::log(theta.moments.mu), std::log(theta.moments.sigma2)};
        }
        MixtureParams reduced;
        reduced.moments = theta.moments;
        double rest = 0.0;
        for (std::size_t k = 0; k < m_; ++k) {
          if (k != h_.component) rest += theta.weights[k];
        }
        for (std::size_t k = 0; k < m_; ++k) {
          if (k == h_.component) continue;
          reduced.weights.push_back(
              rest > 0.0 ? theta.weights[k] / rest
                         : 1.0 / static_cast<double>(m_ - 1));
        }
        return to_unconstrained(reduced);
      }
    }
    throw_invalid("unknown hypothesis kind");
  }

 private:
  static Moments moments_from(std::span<const double> x) {
    Moments m{std::exp(x[0]), std::exp(x[1])};
    if (!std::isfinite(m.mu) || !std::isfinite(m.sigma2) || m.mu <= 0.0 ||
        m.sigma2 <= 0.0) {
      throw_numeric("manifold point maps outside the representable range");
    }
    return m;
  }

  SharpHypothesis h_;
  std::size_t m_;
};

// Indices of the largest values under `key`, up to `take` of them.
std::vector<std::size_t> top_indices(std::size_t n, std::size_t take,
                                     const std::function<double(std::size_t)>& key) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  take = std::min(take, n);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(take),
                    idx.end(), [&key](std::size_t a, std::size_t b) {
                      return key(a) > key(b);
                    });
  idx.resize(take);
  return idx;
}

}  // namespace

std::string hypothesis_label(const SharpHypothesis& h,
                             const std::vector<Family>& families) {
  switch (h.kind) {
    case HypothesisKind::full_space:
      return "full_space";
    case HypothesisKind::weight_is_zero:
    case HypothesisKind::weight_is_one: {
      if (h.component >= families.size()) {
        throw_invalid("hypothesis component index out of range");
      }
      const char* value = h.kind == HypothesisKind::weight_is_zero ? "0" : "1";
      return "p_" + family_name(families[h.component]) + "=" + value;
    }
  }
  throw_invalid("unknown hypothesis kind");
}

SupResult sup_under_hypothesis(const Dataset& data, const SharpHypothesis& h,
                               const PosteriorDraws& draws,
                               const SupOptions& opts) {
  if (draws.draws.empty()) throw_invalid("posterior draws must be nonempty");
  const std::size_t n = draws.draws.size();
  Manifold manifold(data, h);

  auto objective = [&](std::span<const double> x) -> double {
    try {
      return log_posterior(data, manifold.lift(x));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::numeric) return -kInf;
      throw;
    }
  };

  // Candidate pool: high-posterior draws, draws nearest the manifold by
  // weight, and a stride across the whole chain for coverage.
  const std::size_t quarter =
      std::max<std::size_t>(1, static_cast<std::size_t>(opts.candidate_pool) / 4);
  std::vector<std::size_t> cand = top_indices(
      n, quarter, [&](std::size_t i) { return draws.draws[i].log_post; });
  if (h.kind != HypothesisKind::full_space) {
    auto near = top_indices(n, quarter, [&](std::size_t i) {
      const double w = draws.draws[i].params.weights[h.component];
      return h.kind == HypothesisKind::weight_is_one ? w : -w;
    });
    cand.insert(cand.end(), near.begin(), near.end());
  }
  const std::size_t stride_count =
      std::max<std::size_t>(1, static_cast<std::size_t>(opts.candidate_pool) / 2);
  for (std::size_t s = 0; s < stride_count; ++s) {
    cand.push_back(s * n / stride_count);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  struct Scored {
    std::vector<double> x;
    double value;
  };
  std::vector<Scored> scored;
  scored.reserve(cand.size());
  for (std::size_t i : cand) {
    std::vector<double> x = manifold.project(draws.draws[i].params);
    const double v = objective(x);
    if (std::isfinite(v)) scored.push_back({std::move(x), v});
  }
  std::sort(scored.begin(), scored.end(),
            [](const Scored& a, const Scored& b) { return a.value > b.value; });

  // Keep the best starts, skipping near-duplicates.
  std::vector<const Scored*> starts;
  for (const Scored& s : scored) {
    if (static_cast<int>(starts.size()) >= opts.starts) break;
    bool dup = false;
    for (const Scored* t : starts) {
      double dist = 0.0;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        dist = std::max(dist, std::abs(s.x[i] - t->x[i]));
      }
      if (dist < 1e-6) {
        dup = true;
        break;
      }
    }
    if (!dup) starts.push_back(&s);
  }

  SupResult res;
  std::ostringstream trace;
  for (const Scored* s : starts) {
    ++res.starts;
    OptimResult opt = maximize(objective, s->x, opts.optim);
    if (!std::isfinite(opt.value)) {
      ++res.failed_starts;
      trace << "start " << res.starts << ": "
            << (opt.note.empty() ? "no finite value" : opt.note) << "; ";
      continue;
    }
    if (opt.value > res.q_star) {
      res.q_star = opt.value;
      res.argmax = manifold.lift(opt.argmax);
    }
  }

  // The full-space supremum dominates every sampled point by definition.
  if (h.kind == HypothesisKind::full_space) {
    for (const Draw& d : draws.draws) {
      if (d.log_post > res.q_star) {
        res.q_star = d.log_post;
        res.argmax = d.params;
      }
    }
  }

  if (!std::isfinite(res.q_star)) {
    throw_numeric("no start produced a finite value under " +
                  hypothesis_label(h, data.families) +
                  (res.starts > 0 ? " (" + trace.str() + ")"
                                  : " (no usable projected draws)"));
  }
  return res;
}

EValue e_value(std::span<const double> log_posteriors, double q_star) {
  if (log_posteriors.empty()) throw_invalid("e-value needs at least one draw");
  std::size_t above = 0;
  for (double lp : log_posteriors) {
    if (lp > q_star) ++above;  // strict: the tangential set excludes q_star
  }
  EValue v;
  v.ev_bar = static_cast<double>(above) / static_cast<double>(log_posteriors.size());
  v.ev = 1.0 - v.ev_bar;
  return v;
}

EValue e_value(const PosteriorDraws& draws, double q_star) {
  std::vector<double> lps;
  lps.reserve(draws.draws.size());
  for (const Draw& d : draws.draws) lps.push_back(d.log_post);
  return e_value(lps, q_star);
}

std::optional<Family> decide(const EvidenceReport& report) {
  const std::size_t m = report.families.size();
  std::vector<double> ev_zero(m, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> ev_one(m, std::numeric_limits<double>::quiet_NaN());
  for (const HypothesisTest& t : report.tests) {
    if (!t.ok()) continue;
    if (t.hypothesis.kind == HypothesisKind::weight_is_zero) {
      ev_zero[t.hypothesis.component] = t.ev;
    } else if (t.hypothesis.kind == HypothesisKind::weight_is_one) {
      ev_one[t.hypothesis.component] = t.ev;
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (std::isnan(ev_zero[k]) || std::isnan(ev_one[k])) return std::nullopt;
  }

  std::size_t k_min = 0, k_max = 0;
  for (std::size_t k = 1; k < m; ++k) {
    if (ev_zero[k] < ev_zero[k_min]) k_min = k;
    if (ev_one[k] > ev_one[k_max]) k_max = k;
  }
  // Both criteria must single out the same family, strictly.
  for (std::size_t k = 0; k < m; ++k) {
    if (k != k_min && !(ev_zero[k_min] < ev_zero[k])) return std::nullopt;
    if (k != k_max && !(ev_one[k_max] > ev_one[k])) return std::nullopt;
  }
  if (k_min != k_max) return std::nullopt;
  return report.families[k_min];
}

EvidenceReport test_hypotheses(const Dataset& data, const PosteriorDraws& draws,
                               const SupOptions& opts) {
  EvidenceReport report;
  report.families = data.families;
  const std::size_t m = data.n_components();

  auto run_one = [&](SharpHypothesis h) {
    HypothesisTest t;
    t.hypothesis = h;
    try {
      SupResult sup = sup_under_hypothesis(data, h, draws, opts);
      t.q_star_log = sup.q_star;
      EValue v = e_value(draws, sup.q_star);
      t.ev_bar = v.ev_bar;
      t.ev = v.ev;
      t.argmax = std::move(sup.argmax);
    } catch (const Error& e) {
      t.status = e.what();
    }
    report.tests.push_back(std::move(t));
  };

  for (std::size_t k = 0; k < m; ++k) {
    run_one({HypothesisKind::weight_is_zero, k});
  }
  for (std::size_t k = 0; k < m; ++k) {
    run_one({HypothesisKind::weight_is_one, k});
  }
  report.chosen = decide(report);
  return report;
}

}  // namespace survmix
