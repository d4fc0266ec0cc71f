#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "survmix/amsampler.hpp"
#include "survmix/mixture.hpp"
#include "survmix/optim.hpp"

namespace survmix {

// Sharp hypotheses on the mixture weights. weight_is_one(k) pins the whole
// weight vector to the k-th unit vector; weight_is_zero(k) removes component
// k and lets the remaining weights roam their reduced simplex.
enum class HypothesisKind { weight_is_zero, weight_is_one, full_space };

struct SharpHypothesis {
  HypothesisKind kind = HypothesisKind::full_space;
  std::size_t component = 0;  // ignored for full_space
};

// e.g. "p_lognormal=0", "p_weibull=1", "full_space"
std::string hypothesis_label(const SharpHypothesis& h,
                             const std::vector<Family>& families);

struct SupOptions {
  int starts = 10;          // local searches launched from projected draws
  int candidate_pool = 200; // draws scored to pick those starting points
  OptimOptions optim{.max_iterations = 150, .grad_tol = 1e-6};
};

struct SupResult {
  double q_star = -std::numeric_limits<double>::infinity();
  MixtureParams argmax;
  int starts = 0;
  int failed_starts = 0;
};

// Maximizes the model-space unnormalized log posterior over the hypothesis
// manifold, multi-starting from the best hypothesis-projected posterior
// draws. Throws a numeric error (with a per-start trace) only if every
// start fails to produce a finite value.
SupResult sup_under_hypothesis(const Dataset& data, const SharpHypothesis& h,
                               const PosteriorDraws& draws,
                               const SupOptions& opts = {});

struct EValue {
  double ev_bar = 0.0;  // posterior mass strictly above the supremum
  double ev = 0.0;      // 1 - ev_bar, the evidence in favor
};

EValue e_value(std::span<const double> log_posteriors, double q_star);
EValue e_value(const PosteriorDraws& draws, double q_star);

struct HypothesisTest {
  SharpHypothesis hypothesis;
  double q_star_log = std::numeric_limits<double>::quiet_NaN();
  double ev_bar = std::numeric_limits<double>::quiet_NaN();
  double ev = std::numeric_limits<double>::quiet_NaN();
  MixtureParams argmax;         // meaningful only when ok()
  std::string status = "ok";    // "ok" or a failure description

  bool ok() const { return status == "ok"; }
};

struct EvidenceReport {
  std::vector<Family> families;
  // weight_is_zero for each component, then weight_is_one for each.
  std::vector<HypothesisTest> tests;
  std::optional<Family> chosen;  // nullopt means undecided
};

// Family k is chosen iff ev(p_k=0) is the strict minimum of the zero
// hypotheses and ev(p_k=1) the strict maximum of the one hypotheses.
std::optional<Family> decide(const EvidenceReport& report);

// Runs sup + e-value for all 2m weight hypotheses and applies the decision
// rule. A failing hypothesis is reported with its error in status while the
// remaining tests still run.
EvidenceReport test_hypotheses(const Dataset& data, const PosteriorDraws& draws,
                               const SupOptions& opts = {});

}  // namespace survmix
