#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "survmix.h"

namespace fs = std::filesystem;

namespace {

struct Str {
  char* p = nullptr;
  ~Str() { svx_string_free(p); }
  std::string view() const { return p ? std::string(p) : std::string(); }
};

svx_sampler_opts short_sampler(unsigned long long seed) {
  svx_sampler_opts s;
  svx_sampler_opts_default(&s);
  s.iterations = 6000;
  s.burn_in = 1000;
  s.thin = 10;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("version and defaults") {
  CHECK(std::string(svx_version()) == "0.1.0");

  svx_sampler_opts s;
  svx_sampler_opts_default(&s);
  CHECK(s.iterations == 60000);
  CHECK(s.burn_in == 10000);
  CHECK(s.thin == 10);
  CHECK(s.adapt_start == 1000);
  CHECK(s.initial_scale == 0.01);
  CHECK(s.regularization == 1e-6);

  svx_fit_opts f;
  svx_fit_opts_default(&f);
  CHECK(f.families ==
        (SVX_FAMILY_LOGNORMAL | SVX_FAMILY_GAMMA | SVX_FAMILY_WEIBULL));
  CHECK(f.grid_points == 200);

  svx_study_opts st;
  svx_study_opts_default(&st);
  CHECK(st.generator == SVX_FAMILY_LOGNORMAL);
  CHECK(st.mu == 20.0);
  CHECK(st.sigma2 == 50.0);
  CHECK(st.pc == 0.1);
  CHECK(st.n == 300);
  CHECK(st.replicates == 20);
  CHECK(st.jobs == 1);
}

TEST_CASE("dataset lifecycle and validation") {
  const double times[] = {1.5, 2.0, 3.25};
  const int events[] = {1, 0, 1};
  svx_dataset* ds = nullptr;
  REQUIRE(svx_dataset_from_arrays(times, events, 3, &ds) == SVX_OK);
  CHECK(svx_dataset_size(ds) == 3);
  CHECK(svx_dataset_events(ds) == 2);

  double t = 0.0;
  int e = -1;
  REQUIRE(svx_dataset_get(ds, 1, &t, &e) == SVX_OK);
  CHECK(t == 2.0);
  CHECK(e == 0);
  CHECK(svx_dataset_get(ds, 3, &t, &e) == SVX_E_INVAL);

  Str csv;
  REQUIRE(svx_dataset_csv(ds, "manifest.json", &csv.p) == SVX_OK);
  CHECK(csv.view().rfind("# manifest: manifest.json\ntime,event\n", 0) == 0);
  Str plain;
  REQUIRE(svx_dataset_csv(ds, nullptr, &plain.p) == SVX_OK);
  CHECK(plain.view().rfind("time,event\n", 0) == 0);
  svx_dataset_free(ds);

  // bad inputs are reported, not crashed on
  const double bad_time[] = {0.0};
  const int one[] = {1};
  svx_dataset* no = nullptr;
  CHECK(svx_dataset_from_arrays(bad_time, one, 1, &no) == SVX_E_INVAL);
  CHECK(no == nullptr);
  CHECK(std::strlen(svx_last_error()) > 0);

  const double ok_time[] = {1.0};
  const int bad_event[] = {2};
  CHECK(svx_dataset_from_arrays(ok_time, bad_event, 1, &no) == SVX_E_INVAL);
  CHECK(svx_dataset_from_arrays(nullptr, nullptr, 0, &no) == SVX_E_INVAL);
}

TEST_CASE("csv files round trip through the library") {
  const auto dir = fs::temp_directory_path() /
                   ("svx-capi-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto path = (dir / "d.csv").string();

  svx_dataset* ds = nullptr;
  REQUIRE(svx_simulate(SVX_FAMILY_GAMMA, 10.0, 20.0, 0.25, 50, 77, &ds,
                       nullptr) == SVX_OK);
  Str csv;
  REQUIRE(svx_dataset_csv(ds, nullptr, &csv.p) == SVX_OK);
  std::ofstream(path) << csv.view();

  svx_dataset* back = nullptr;
  REQUIRE(svx_dataset_read_csv(path.c_str(), &back) == SVX_OK);
  CHECK(svx_dataset_size(back) == 50);
  CHECK(svx_dataset_events(back) == svx_dataset_events(ds));
  svx_dataset_free(back);
  svx_dataset_free(ds);

  svx_dataset* missing = nullptr;
  CHECK(svx_dataset_read_csv((dir / "absent.csv").string().c_str(), &missing) ==
        SVX_E_DATA);

  std::ofstream(path) << "time,event\nnope,1\n";
  CHECK(svx_dataset_read_csv(path.c_str(), &missing) == SVX_E_DATA);
  CHECK(std::string(svx_last_error()).find("line") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("simulation is calibrated and deterministic") {
  double lam = 0.0;
  REQUIRE(svx_calibrate_lambda(SVX_FAMILY_WEIBULL, 5.0, 25.0, 0.5, &lam) ==
          SVX_OK);
  CHECK(std::abs(lam - 0.2) < 1e-6);

  CHECK(svx_calibrate_lambda(SVX_FAMILY_WEIBULL, 5.0, 25.0, 1.5, &lam) ==
        SVX_E_INVAL);
  CHECK(svx_calibrate_lambda(0u, 5.0, 25.0, 0.5, &lam) == SVX_E_INVAL);
  CHECK(svx_calibrate_lambda(SVX_FAMILY_LOGNORMAL | SVX_FAMILY_GAMMA, 5.0, 25.0,
                             0.5, &lam) == SVX_E_INVAL);

  svx_dataset* a = nullptr;
  svx_dataset* b = nullptr;
  double la = 0.0, lb = 0.0;
  REQUIRE(svx_simulate(SVX_FAMILY_LOGNORMAL, 20.0, 50.0, 0.3, 120, 9, &a, &la) ==
          SVX_OK);
  REQUIRE(svx_simulate(SVX_FAMILY_LOGNORMAL, 20.0, 50.0, 0.3, 120, 9, &b, &lb) ==
          SVX_OK);
  CHECK(la == lb);
  CHECK(la > 0.0);
  for (size_t i = 0; i < 120; ++i) {
    double ta = 0.0, tb = 0.0;
    int ea = 0, eb = 0;
    svx_dataset_get(a, i, &ta, &ea);
    svx_dataset_get(b, i, &tb, &eb);
    CHECK(ta == tb);
    CHECK(ea == eb);
  }
  svx_dataset_free(a);
  svx_dataset_free(b);

  svx_dataset* pure = nullptr;
  double lz = -1.0;
  REQUIRE(svx_simulate(SVX_FAMILY_GAMMA, 4.0, 4.0, 0.0, 30, 5, &pure, &lz) ==
          SVX_OK);
  CHECK(lz == 0.0);
  CHECK(svx_dataset_events(pure) == 30);
  svx_dataset_free(pure);
}

TEST_CASE("fit handles run end to end") {
  svx_dataset* ds = nullptr;
  REQUIRE(svx_simulate(SVX_FAMILY_WEIBULL, 20.0, 50.0, 0.15, 90, 123, &ds,
                       nullptr) == SVX_OK);

  svx_fit_opts opts;
  svx_fit_opts_default(&opts);
  opts.sampler = short_sampler(17);

  svx_fit* fit = nullptr;
  REQUIRE(svx_fit_run(ds, &opts, &fit) == SVX_OK);

  const double rate = svx_fit_acceptance_rate(fit);
  CHECK(rate > 0.0);
  CHECK(rate < 1.0);
  CHECK(svx_fit_has_pexe(fit) == 1);

  Str ev;
  REQUIRE(svx_fit_evidence_json(fit, &ev.p) == SVX_OK);
  const auto doc = nlohmann::json::parse(ev.view());
  CHECK(doc["tests"].size() == 6);
  CHECK(doc["n_draws"] == 500);

  unsigned chosen = 99;
  REQUIRE(svx_fit_chosen_family(fit, &chosen) == SVX_OK);
  if (doc["chosen_family"].is_null()) {
    CHECK(chosen == 0u);
  } else {
    CHECK((chosen == SVX_FAMILY_LOGNORMAL || chosen == SVX_FAMILY_GAMMA ||
           chosen == SVX_FAMILY_WEIBULL));
  }

  Str summary, curves, draws;
  REQUIRE(svx_fit_summary_csv(fit, &summary.p) == SVX_OK);
  CHECK(summary.view().rfind("param,mean,sd,q2.5,median,q97.5\n", 0) == 0);
  REQUIRE(svx_fit_curves_csv(fit, &curves.p) == SVX_OK);
  CHECK(curves.view().rfind("t,pexe,mixture", 0) == 0);
  REQUIRE(svx_fit_draws_csv(fit, &draws.p) == SVX_OK);
  size_t rows = 0;
  for (char c : draws.view()) rows += c == '\n' ? 1 : 0;
  CHECK(rows == 501);  // header + one line per retained draw

  svx_fit_free(fit);

  // two-family fit via the mask
  opts.families = SVX_FAMILY_LOGNORMAL | SVX_FAMILY_WEIBULL;
  svx_fit* fit2 = nullptr;
  REQUIRE(svx_fit_run(ds, &opts, &fit2) == SVX_OK);
  Str ev2;
  REQUIRE(svx_fit_evidence_json(fit2, &ev2.p) == SVX_OK);
  CHECK(nlohmann::json::parse(ev2.view())["tests"].size() == 4);
  svx_fit_free(fit2);

  // one family is not a mixture
  opts.families = SVX_FAMILY_GAMMA;
  svx_fit* bad = nullptr;
  CHECK(svx_fit_run(ds, &opts, &bad) == SVX_E_INVAL);
  svx_dataset_free(ds);
}

TEST_CASE("null arguments are rejected") {
  CHECK(svx_fit_run(nullptr, nullptr, nullptr) == SVX_E_INVAL);
  CHECK(svx_dataset_read_csv(nullptr, nullptr) == SVX_E_INVAL);
  CHECK(svx_fit_evidence_json(nullptr, nullptr) == SVX_E_INVAL);
  CHECK(svx_study_csv(nullptr, nullptr) == SVX_E_INVAL);
  CHECK(svx_dataset_size(nullptr) == 0);
  CHECK(svx_fit_has_pexe(nullptr) == 0);
}

TEST_CASE("study runs through the flat interface") {
  svx_study_opts opts;
  svx_study_opts_default(&opts);
  opts.generator = SVX_FAMILY_GAMMA;
  opts.n = 60;
  opts.replicates = 2;
  opts.pc = 0.2;
  opts.seed = 21;
  opts.sampler = short_sampler(0);

  svx_study* study = nullptr;
  REQUIRE(svx_study_run(&opts, &study) == SVX_OK);
  CHECK(svx_study_lambda(study) > 0.0);
  CHECK(svx_study_pct_correct(study) >= 0.0);
  CHECK(svx_study_pct_correct(study) <= 100.0);
  CHECK(svx_study_failures(study) <= 2);

  Str csv;
  REQUIRE(svx_study_csv(study, &csv.p) == SVX_OK);
  CHECK(csv.view().rfind(
            "censoring,model,n,mu_hat,sigma2_hat,pL,pG,pW,pct_correct\n", 0) ==
        0);
  CHECK(csv.view().find(",gamma,60,") != std::string::npos);
  svx_study_free(study);

  opts.replicates = 0;
  svx_study* bad = nullptr;
  CHECK(svx_study_run(&opts, &bad) == SVX_E_INVAL);
}
