// Command line front end: fit, simulate, study. Talks to the library
// exclusively through the C interface in survmix.h.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "survmix.h"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct CmdError {
  int exit_code;
  std::string message;
};

int to_exit(int rc) {
  switch (rc) {
    case SVX_OK:
      return 0;
    case SVX_E_INVAL:
      return 2;
    case SVX_E_DATA:
      return 3;
    case SVX_E_NUMERIC:
      return 4;
    default:
      return 1;
  }
}

void check(int rc) {
  if (rc != SVX_OK) throw CmdError{to_exit(rc), svx_last_error()};
}

// Owning wrapper for strings handed out by the library.
struct SvxString {
  char* ptr = nullptr;
  ~SvxString() { svx_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

unsigned family_bit(const std::string& name) {
  if (name == "lognormal") return SVX_FAMILY_LOGNORMAL;
  if (name == "gamma") return SVX_FAMILY_GAMMA;
  if (name == "weibull") return SVX_FAMILY_WEIBULL;
  throw CmdError{2, "unknown family '" + name +
                        "' (expected lognormal, gamma, or weibull)"};
}

unsigned mask_from_list(const std::string& csv) {
  unsigned mask = 0;
  std::stringstream ss(csv);
  std::string item;
  int count = 0;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const unsigned bit = family_bit(item);
    if (mask & bit) throw CmdError{2, "family '" + item + "' listed twice"};
    mask |= bit;
    ++count;
  }
  if (count < 2) throw CmdError{2, "--families needs at least two of lognormal,gamma,weibull"};
  return mask;
}

ordered_json names_from_mask(unsigned mask) {
  ordered_json names = ordered_json::array();
  if (mask & SVX_FAMILY_LOGNORMAL) names.push_back("lognormal");
  if (mask & SVX_FAMILY_GAMMA) names.push_back("gamma");
  if (mask & SVX_FAMILY_WEIBULL) names.push_back("weibull");
  return names;
}

ordered_json sampler_json(const svx_sampler_opts& s) {
  ordered_json j;
  j["iterations"] = s.iterations;
  j["burn_in"] = s.burn_in;
  j["thin"] = s.thin;
  j["adapt_start"] = s.adapt_start;
  j["initial_scale"] = s.initial_scale;
  j["regularization"] = s.regularization;
  j["seed"] = s.seed;
  return j;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CmdError{3, "cannot write " + path.string()};
  out << content;
  if (!out) throw CmdError{3, "write failed for " + path.string()};
}

// Output files carry a comment (CSV) or key (JSON) pointing back at the
// manifest of the run that produced them.
constexpr const char* kManifestName = "manifest.json";

std::string with_manifest_comment(const std::string& csv) {
  return std::string("# manifest: ") + kManifestName + "\n" + csv;
}

std::string with_manifest_key(const std::string& json_text) {
  ordered_json doc = ordered_json::parse(json_text);
  doc["manifest"] = kManifestName;
  return doc.dump(2) + "\n";
}

struct ManifestClock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::vector<std::string>& argv, ordered_json config,
                    unsigned long long seed, ordered_json outputs,
                    const ManifestClock& clock, ordered_json extra = {}) {
  ordered_json m;
  m["command"] = command;
  m["argv"] = argv;
  m["version"] = svx_version();
  m["seed"] = seed;
  m["config"] = std::move(config);
  m["outputs"] = std::move(outputs);
  for (auto& [key, value] : extra.items()) m[key] = value;
  m["duration_seconds"] = clock.seconds();
  write_file(out_dir / kManifestName, m.dump(2) + "\n");
}

struct SamplerFlags {
  svx_sampler_opts opts{};

  void attach(CLI::App* cmd, bool seed_required) {
    svx_sampler_opts_default(&opts);
    cmd->add_option("--iterations", opts.iterations, "Total MCMC steps")
        ->capture_default_str();
    cmd->add_option("--burn-in", opts.burn_in, "Discarded initial steps")
        ->capture_default_str();
    cmd->add_option("--thin", opts.thin, "Keep every thin-th state")
        ->capture_default_str();
    cmd->add_option("--adapt-start", opts.adapt_start,
                    "Step at which proposal adaptation begins")
        ->capture_default_str();
    cmd->add_option("--initial-scale", opts.initial_scale,
                    "Proposal variance before adaptation")
        ->capture_default_str();
    cmd->add_option("--regularization", opts.regularization,
                    "Ridge added to the adapted covariance")
        ->capture_default_str();
    auto* seed = cmd->add_option("--seed", opts.seed, "RNG seed");
    if (seed_required) {
      seed->required();
    } else {
      opts.seed = 42;  // recorded in the manifest either way
      seed->capture_default_str();
    }
  }
};

int cmd_fit(const std::vector<std::string>& argv, const std::string& input,
            const std::string& families_list, const std::string& out_dir_str,
            const SamplerFlags& sampler, int grid_points, bool dump_draws) {
  const ManifestClock clock;
  const unsigned mask = mask_from_list(families_list);
  const fs::path out_dir(out_dir_str);
  fs::create_directories(out_dir);

  svx_dataset* ds = nullptr;
  check(svx_dataset_read_csv(input.c_str(), &ds));

  svx_fit_opts opts;
  svx_fit_opts_default(&opts);
  opts.families = mask;
  opts.sampler = sampler.opts;
  opts.grid_points = grid_points;

  svx_fit* fit = nullptr;
  const int rc = svx_fit_run(ds, &opts, &fit);
  if (rc != SVX_OK) {
    svx_dataset_free(ds);
    check(rc);
  }

  SvxString evidence, summary, curves, draws;
  check(svx_fit_evidence_json(fit, &evidence.ptr));
  check(svx_fit_summary_csv(fit, &summary.ptr));
  check(svx_fit_curves_csv(fit, &curves.ptr));
  if (dump_draws) check(svx_fit_draws_csv(fit, &draws.ptr));

  write_file(out_dir / "evidence-report.json", with_manifest_key(evidence.str()));
  write_file(out_dir / "posterior-summary.csv", with_manifest_comment(summary.str()));
  write_file(out_dir / "curves.csv", with_manifest_comment(curves.str()));
  if (dump_draws) {
    write_file(out_dir / "draws.csv", with_manifest_comment(draws.str()));
  }

  if (!svx_fit_has_pexe(fit)) {
    std::cerr << "warning: no uncensored observations; "
                 "nonparametric survival curve omitted\n";
  }
  const ordered_json report = ordered_json::parse(evidence.str());
  if (report.at("acceptance_warning").get<bool>()) {
    std::cerr << "warning: acceptance rate "
              << report.at("acceptance_rate").get<double>()
              << " outside the (0.05, 0.6) band; "
                 "consider adjusting the sampler settings\n";
  }

  unsigned chosen = 0;
  check(svx_fit_chosen_family(fit, &chosen));
  std::cout << "chosen family: "
            << (chosen ? names_from_mask(chosen)[0].get<std::string>()
                       : std::string("undecided"))
            << "\n";

  ordered_json config;
  config["input"] = input;
  config["families"] = names_from_mask(mask);
  config["sampler"] = sampler_json(sampler.opts);
  config["grid_points"] = grid_points;
  config["draws"] = dump_draws;
  config["out"] = out_dir_str;
  ordered_json outputs =
      ordered_json::array({"evidence-report.json", "posterior-summary.csv", "curves.csv"});
  if (dump_draws) outputs.push_back("draws.csv");
  write_manifest(out_dir, "fit", argv, std::move(config), sampler.opts.seed,
                 std::move(outputs), clock);

  svx_fit_free(fit);
  svx_dataset_free(ds);
  return 0;
}

int cmd_simulate(const std::vector<std::string>& argv, const std::string& family,
                 double mu, double sigma2, std::size_t n, double pc,
                 unsigned long long seed, const std::string& out_dir_str) {
  const ManifestClock clock;
  const unsigned bit = family_bit(family);
  const fs::path out_dir(out_dir_str);
  fs::create_directories(out_dir);

  svx_dataset* ds = nullptr;
  double lambda = 0.0;
  check(svx_simulate(bit, mu, sigma2, pc, n, seed, &ds, &lambda));

  SvxString csv;
  check(svx_dataset_csv(ds, kManifestName, &csv.ptr));
  write_file(out_dir / "dataset.csv", csv.str());

  std::cout << "dataset.csv: n=" << svx_dataset_size(ds)
            << " events=" << svx_dataset_events(ds) << " lambda=" << lambda
            << "\n";

  ordered_json config;
  config["family"] = family;
  config["mu"] = mu;
  config["sigma2"] = sigma2;
  config["n"] = n;
  config["pc"] = pc;
  config["out"] = out_dir_str;
  ordered_json extra;
  extra["lambda"] = lambda;
  write_manifest(out_dir, "simulate", argv, std::move(config), seed,
                 ordered_json::array({"dataset.csv"}), clock, std::move(extra));

  svx_dataset_free(ds);
  return 0;
}

int cmd_study(const std::vector<std::string>& argv, const std::string& family,
              double mu, double sigma2, std::size_t n, double pc, int replicates,
              int jobs, const SamplerFlags& sampler,
              const std::string& out_dir_str) {
  const ManifestClock clock;
  const unsigned bit = family_bit(family);
  const fs::path out_dir(out_dir_str);
  fs::create_directories(out_dir);

  svx_study_opts opts;
  svx_study_opts_default(&opts);
  opts.generator = bit;
  opts.mu = mu;
  opts.sigma2 = sigma2;
  opts.pc = pc;
  opts.n = n;
  opts.replicates = replicates;
  opts.jobs = jobs;
  opts.seed = sampler.opts.seed;
  opts.sampler = sampler.opts;

  svx_study* study = nullptr;
  check(svx_study_run(&opts, &study));

  SvxString csv;
  check(svx_study_csv(study, &csv.ptr));
  write_file(out_dir / "study-results.csv", with_manifest_comment(csv.str()));

  if (svx_study_failures(study) > 0) {
    std::cerr << "warning: " << svx_study_failures(study)
              << " replicate(s) failed and were counted as incorrect\n";
  }
  std::cout << "pct_correct=" << svx_study_pct_correct(study) << "\n";

  ordered_json config;
  config["family"] = family;
  config["mu"] = mu;
  config["sigma2"] = sigma2;
  config["n"] = n;
  config["pc"] = pc;
  config["replicates"] = replicates;
  config["jobs"] = jobs;
  config["sampler"] = sampler_json(sampler.opts);
  config["out"] = out_dir_str;
  ordered_json extra;
  extra["lambda"] = svx_study_lambda(study);
  write_manifest(out_dir, "study", argv, std::move(config), opts.seed,
                 ordered_json::array({"study-results.csv"}), clock,
                 std::move(extra));

  svx_study_free(study);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> raw_args(argv, argv + argc);

  CLI::App app{"Discriminates lognormal, gamma, and Weibull survival models "
               "for right-censored data via mixture e-values"};
  app.require_subcommand(1);
  app.set_version_flag("--version", svx_version());

  // fit
  auto* fit = app.add_subcommand("fit", "Fit the mixture and test the weights");
  std::string fit_input;
  std::string fit_families = "lognormal,gamma,weibull";
  std::string fit_out = ".";
  int grid_points = 200;
  bool dump_draws = false;
  SamplerFlags fit_sampler;
  fit->add_option("input", fit_input, "CSV with header time,event")->required();
  fit->add_option("--families", fit_families,
                  "Comma-separated subset of lognormal,gamma,weibull (>= 2)")
      ->capture_default_str();
  fit->add_option("--out", fit_out, "Output directory")->capture_default_str();
  fit->add_option("--grid-points", grid_points, "Survival-curve grid size")
      ->capture_default_str();
  fit->add_flag("--draws", dump_draws, "Also write the retained draws CSV");
  fit_sampler.attach(fit, /*seed_required=*/false);

  // simulate
  auto* sim = app.add_subcommand("simulate",
                                 "Generate a calibrated right-censored sample");
  std::string sim_family;
  double sim_mu = 20.0, sim_sigma2 = 50.0, sim_pc = 0.0;
  std::size_t sim_n = 0;
  unsigned long long sim_seed = 0;
  std::string sim_out = ".";
  sim->add_option("--family", sim_family, "Generating family")->required();
  sim->add_option("--mu", sim_mu, "Population mean")->required();
  sim->add_option("--sigma2", sim_sigma2, "Population variance")->required();
  sim->add_option("--n", sim_n, "Sample size")->required();
  sim->add_option("--pc", sim_pc, "Target censoring probability in [0,1)")
      ->required();
  sim->add_option("--seed", sim_seed, "RNG seed")->required();
  sim->add_option("--out", sim_out, "Output directory")->capture_default_str();

  // study
  auto* study = app.add_subcommand(
      "study", "Replicated correct-decision experiment for one generator");
  std::string study_family;
  double study_mu = 20.0, study_sigma2 = 50.0, study_pc = 0.1;
  std::size_t study_n = 300;
  int replicates = 20;
  int jobs = 1;
  std::string study_out = ".";
  SamplerFlags study_sampler;
  study->add_option("--family", study_family, "Generating family")->required();
  study->add_option("--mu", study_mu, "Population mean")->capture_default_str();
  study->add_option("--sigma2", study_sigma2, "Population variance")
      ->capture_default_str();
  study->add_option("--n", study_n, "Sample size per replicate")
      ->capture_default_str();
  study->add_option("--pc", study_pc, "Target censoring probability")
      ->capture_default_str();
  study->add_option("--replicates", replicates, "Number of replicates")
      ->capture_default_str();
  study->add_option("--jobs", jobs, "Replicate-level parallelism")
      ->capture_default_str();
  study->add_option("--out", study_out, "Output directory")
      ->capture_default_str();
  study_sampler.attach(study, /*seed_required=*/true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*fit) {
      return cmd_fit(raw_args, fit_input, fit_families, fit_out, fit_sampler,
                     grid_points, dump_draws);
    }
    if (*sim) {
      return cmd_simulate(raw_args, sim_family, sim_mu, sim_sigma2, sim_n,
                          sim_pc, sim_seed, sim_out);
    }
    if (*study) {
      return cmd_study(raw_args, study_family, study_mu, study_sigma2, study_n,
                       study_pc, replicates, jobs, study_sampler, study_out);
    }
  } catch (const CmdError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
