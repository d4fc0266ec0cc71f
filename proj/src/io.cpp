#include "survmix/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "survmix/errors.hpp"

namespace survmix::io {

namespace {

using ordered_json = nlohmann::ordered_json;

// Linear-interpolation quantile on a sorted copy (the numpy default rule).
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SummaryRow summarize(std::string name, std::vector<double>& values) {
  const std::size_t n = values.size();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  std::sort(values.begin(), values.end());
  return SummaryRow{std::move(name), mean, sd, quantile_sorted(values, 0.025),
                    quantile_sorted(values, 0.5), quantile_sorted(values, 0.975)};
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool parse_full_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw_numeric("number formatting failed");
  return std::string(buf, ptr);
}

std::vector<Observation> read_observations_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_data("cannot open " + path);

  std::vector<Observation> obs;
  std::vector<std::size_t> bad_lines;
  bool header_seen = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "time,event") {
        throw_data(path + ": first data line must be the header time,event");
      }
      header_seen = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      bad_lines.push_back(line_no);
      continue;
    }
    const std::string time_str = line.substr(0, comma);
    const std::string event_str = line.substr(comma + 1);
    double time = 0.0;
    if (!parse_full_double(time_str, time) || !std::isfinite(time) || time <= 0.0 ||
        (event_str != "0" && event_str != "1")) {
      bad_lines.push_back(line_no);
      continue;
    }
    obs.push_back({time, event_str == "1"});
  }
  if (!header_seen) throw_data(path + ": missing time,event header");
  if (!bad_lines.empty()) {
    std::ostringstream msg;
    msg << path << ": malformed rows at lines:";
    for (std::size_t i = 0; i < bad_lines.size(); ++i) {
      msg << (i ? "," : "") << ' ' << bad_lines[i];
    }
    throw_data(msg.str());
  }
  if (obs.empty()) throw_data(path + ": no observations");
  return obs;
}

std::string observations_csv(const std::vector<Observation>& observations,
                             const std::string& manifest_ref) {
  std::ostringstream out;
  if (!manifest_ref.empty()) out << "# manifest: " << manifest_ref << "\n";
  out << "time,event\n";
  for (const Observation& obs : observations) {
    out << format_double(obs.time) << ',' << (obs.event ? '1' : '0') << "\n";
  }
  return out.str();
}

std::string draws_csv(const PosteriorDraws& draws, std::size_t n_components) {
  std::ostringstream out;
  out << "mu,sigma2";
  for (std::size_t k = 1; k <= n_components; ++k) out << ",p" << k;
  out << ",log_post\n";
  for (const Draw& d : draws.draws) {
    out << format_double(d.params.moments.mu) << ','
        << format_double(d.params.moments.sigma2);
    for (double w : d.params.weights) out << ',' << format_double(w);
    out << ',' << format_double(d.log_post) << "\n";
  }
  return out.str();
}

std::vector<SummaryRow> posterior_summary(const PosteriorDraws& draws,
                                          const std::vector<Family>& families) {
  if (draws.draws.empty()) throw_invalid("posterior summary needs draws");
  const std::size_t m = families.size();
  std::vector<SummaryRow> rows;
  std::vector<double> values(draws.draws.size());
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < draws.draws.size(); ++i) {
      values[i] = draws.draws[i].params.weights[k];
    }
    rows.push_back(summarize("p_" + family_name(families[k]), values));
  }
  for (std::size_t i = 0; i < draws.draws.size(); ++i) {
    values[i] = draws.draws[i].params.moments.mu;
  }
  rows.push_back(summarize("mu", values));
  for (std::size_t i = 0; i < draws.draws.size(); ++i) {
    values[i] = draws.draws[i].params.moments.sigma2;
  }
  rows.push_back(summarize("sigma2", values));
  return rows;
}

std::string posterior_summary_csv(const PosteriorDraws& draws,
                                  const std::vector<Family>& families) {
  std::ostringstream out;
  out << "param,mean,sd,q2.5,median,q97.5\n";
  for (const SummaryRow& r : posterior_summary(draws, families)) {
    out << r.param << ',' << format_double(r.mean) << ',' << format_double(r.sd)
        << ',' << format_double(r.q2_5) << ',' << format_double(r.median) << ','
        << format_double(r.q97_5) << "\n";
  }
  return out.str();
}

std::string curves_csv(const FitResult& fit) {
  const std::size_t m = fit.data.n_components();
  const std::size_t n_draws = fit.draws.draws.size();
  if (n_draws == 0) throw_invalid("curve export needs draws");

  // Posterior means drive the mixture curve.
  Moments mean_moments{0.0, 0.0};
  std::vector<double> mean_w(m, 0.0);
  for (const Draw& d : fit.draws.draws) {
    mean_moments.mu += d.params.moments.mu;
    mean_moments.sigma2 += d.params.moments.sigma2;
    for (std::size_t k = 0; k < m; ++k) mean_w[k] += d.params.weights[k];
  }
  const double inv = 1.0 / static_cast<double>(n_draws);
  mean_moments.mu *= inv;
  mean_moments.sigma2 *= inv;
  double w_sum = 0.0;
  for (auto& w : mean_w) {
    w *= inv;
    w_sum += w;
  }
  for (auto& w : mean_w) w /= w_sum;

  std::vector<std::optional<Component>> comp(m);
  for (std::size_t k = 0; k < m; ++k) {
    try {
      comp[k].emplace(fit.data.families[k], mean_moments);
    } catch (const Error& e) {
      // A vanishing component that cannot be converted is dropped.
      if (e.kind() != ErrorKind::numeric || mean_w[k] > 1e-6) throw;
    }
  }

  std::optional<Component> chosen_comp;
  std::string chosen_name;
  if (fit.report.chosen) {
    for (const HypothesisTest& t : fit.report.tests) {
      if (t.ok() && t.hypothesis.kind == HypothesisKind::weight_is_one &&
          fit.data.families[t.hypothesis.component] == *fit.report.chosen) {
        chosen_name = family_name(*fit.report.chosen);
        chosen_comp.emplace(*fit.report.chosen, t.argmax.moments);
        break;
      }
    }
  }

  double t_max = 0.0;
  for (const Observation& obs : fit.data.observations) {
    t_max = std::max(t_max, obs.time);
  }

  std::ostringstream out;
  out << "t";
  if (fit.pexe) out << ",pexe";
  out << ",mixture";
  if (chosen_comp) out << ',' << chosen_name;
  out << "\n";

  const int points = fit.config.grid_points;
  for (int i = 1; i <= points; ++i) {
    const double t = t_max * static_cast<double>(i) / static_cast<double>(points);
    out << format_double(t);
    if (fit.pexe) out << ',' << format_double(fit.pexe->survival_at(t));
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (comp[k]) s += mean_w[k] * comp[k]->survival(t);
    }
    out << ',' << format_double(s);
    if (chosen_comp) out << ',' << format_double(chosen_comp->survival(t));
    out << "\n";
  }
  return out.str();
}

std::string evidence_json(const FitResult& fit) {
  ordered_json doc;
  ordered_json families = ordered_json::array();
  for (Family f : fit.report.families) families.push_back(family_name(f));
  doc["families"] = std::move(families);
  doc["chosen_family"] = fit.report.chosen
                             ? ordered_json(family_name(*fit.report.chosen))
                             : ordered_json(nullptr);
  doc["n_draws"] = fit.draws.draws.size();
  doc["acceptance_rate"] = fit.draws.acceptance_rate;
  doc["acceptance_warning"] = fit.draws.acceptance_warning;

  ordered_json tests = ordered_json::array();
  for (const HypothesisTest& t : fit.report.tests) {
    ordered_json entry;
    entry["hypothesis"] = hypothesis_label(t.hypothesis, fit.report.families);
    entry["q_star_log"] = t.q_star_log;  // non-finite serializes as null
    entry["ev"] = t.ev;
    entry["ev_bar"] = t.ev_bar;
    entry["status"] = t.status;
    if (t.ok()) {
      ordered_json argmax;
      argmax["mu"] = t.argmax.moments.mu;
      argmax["sigma2"] = t.argmax.moments.sigma2;
      argmax["weights"] = t.argmax.weights;
      entry["argmax"] = std::move(argmax);
    } else {
      entry["argmax"] = nullptr;
    }
    tests.push_back(std::move(entry));
  }
  doc["tests"] = std::move(tests);
  return doc.dump(2) + "\n";
}

std::string study_csv(const StudyResult& result) {
  auto index_of = [&result](Family f) -> std::size_t {
    for (std::size_t k = 0; k < result.fit_families.size(); ++k) {
      if (result.fit_families[k] == f) return k;
    }
    throw_invalid("study row export needs all three families fitted");
  };
  const std::size_t iL = index_of(Family::lognormal);
  const std::size_t iG = index_of(Family::gamma);
  const std::size_t iW = index_of(Family::weibull);

  std::ostringstream out;
  out << "censoring,model,n,mu_hat,sigma2_hat,pL,pG,pW,pct_correct\n";
  out << format_double(result.pc) << ',' << family_name(result.generator) << ','
      << result.n << ',' << format_double(result.mu_hat) << ','
      << format_double(result.sigma2_hat) << ','
      << format_double(result.weight_hats[iL]) << ','
      << format_double(result.weight_hats[iG]) << ','
      << format_double(result.weight_hats[iW]) << ','
      << format_double(result.pct_correct) << "\n";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_data("cannot write " + path);
  out << content;
  if (!out) throw_data("write failed for " + path);
}

}  // namespace survmix::io
