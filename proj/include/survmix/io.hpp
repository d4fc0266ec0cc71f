#pragma once

#include <string>
#include <vector>

#include "survmix/fit.hpp"
#include "survmix/mixture.hpp"
#include "survmix/simcens.hpp"

namespace survmix::io {

// Shortest representation that parses back to the same double.
std::string format_double(double v);

// Reads a `time,event` CSV. Lines starting with '#' are ignored; malformed
// rows are reported together with their 1-based line numbers.
std::vector<Observation> read_observations_csv(const std::string& path);

// `time,event` CSV text; when manifest_ref is nonempty, a leading
// `# manifest: <ref>` comment ties the file to its run manifest.
std::string observations_csv(const std::vector<Observation>& observations,
                             const std::string& manifest_ref = "");

// Retained chain states; header `mu,sigma2,p1,...,pm,log_post`.
std::string draws_csv(const PosteriorDraws& draws, std::size_t n_components);

struct SummaryRow {
  std::string param;
  double mean, sd, q2_5, median, q97_5;
};

// One row per weight (p_<family>) followed by mu and sigma2.
std::vector<SummaryRow> posterior_summary(const PosteriorDraws& draws,
                                          const std::vector<Family>& families);
std::string posterior_summary_csv(const PosteriorDraws& draws,
                                  const std::vector<Family>& families);

// Survival curves on an even time grid up to the largest observed time:
// the nonparametric estimate (when present), the posterior-mean mixture,
// and the best single-family fit of the chosen family (when decided).
std::string curves_csv(const FitResult& fit);

// Evidence report as a JSON document (see schemas/evidence-report.schema.json).
std::string evidence_json(const FitResult& fit);

// Header plus one row: censoring,model,n,mu_hat,sigma2_hat,pL,pG,pW,pct_correct.
// Requires the study to have fitted all three families.
std::string study_csv(const StudyResult& result);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace survmix::io
