#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "survmix/amsampler.hpp"
#include "survmix/errors.hpp"
#include "survmix/mixture.hpp"
#include "survmix/rng.hpp"

using namespace survmix;

namespace {

Dataset small_data(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<Observation> obs;
  for (std::size_t i = 0; i < n; ++i) {
    obs.push_back({rng.gamma(4.0, 5.0), i % 5 != 0});
  }
  return make_dataset(std::move(obs),
                      {Family::lognormal, Family::gamma, Family::weibull});
}

SamplerConfig short_cfg(std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.iterations = 6000;
  cfg.burn_in = 1000;
  cfg.thin = 5;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  SamplerConfig bad;
  bad.burn_in = bad.iterations;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = {};
  bad.thin = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = {};
  bad.initial_scale = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_NOTHROW(SamplerConfig{}.validate());
}

TEST_CASE("raw chain recovers a spherical gaussian") {
  const auto target = [](std::span<const double> z) {
    return std::make_pair(-0.5 * (z[0] * z[0] + z[1] * z[1]), 42.0);
  };
  SamplerConfig cfg;
  cfg.iterations = 110000;
  cfg.burn_in = 10000;
  cfg.thin = 1;
  cfg.seed = 31;
  const auto chain = run_chain_raw(target, {0.0, 0.0}, cfg);
  REQUIRE(chain.states.size() == 100000);
  CHECK(chain.aux[0] == 42.0);
  CHECK(chain.acceptance_rate > 0.05);
  CHECK(chain.acceptance_rate < 0.6);

  double m0 = 0.0, m1 = 0.0;
  for (const auto& s : chain.states) {
    m0 += s[0];
    m1 += s[1];
  }
  m0 /= chain.states.size();
  m1 /= chain.states.size();
  CHECK(std::abs(m0) < 0.06);
  CHECK(std::abs(m1) < 0.06);

  double c00 = 0.0, c11 = 0.0, c01 = 0.0;
  for (const auto& s : chain.states) {
    c00 += (s[0] - m0) * (s[0] - m0);
    c11 += (s[1] - m1) * (s[1] - m1);
    c01 += (s[0] - m0) * (s[1] - m1);
  }
  c00 /= chain.states.size();
  c11 /= chain.states.size();
  c01 /= chain.states.size();
  CHECK(std::abs(c00 - 1.0) < 0.05);
  CHECK(std::abs(c11 - 1.0) < 0.05);
  CHECK(std::abs(c01) < 0.05);
}

TEST_CASE("raw chain handles correlated four-dimensional targets") {
  // equicorrelated gaussian, rho = 0.5: precision 2(I - 0.2 * ones)
  const auto target = [](std::span<const double> z) {
    double sum = 0.0, ss = 0.0;
    for (double v : z) {
      sum += v;
      ss += v * v;
    }
    return std::make_pair(-(ss - 0.2 * sum * sum), 0.0);
  };
  SamplerConfig cfg;
  cfg.iterations = 90000;
  cfg.burn_in = 10000;
  cfg.thin = 1;
  cfg.seed = 77;
  const auto chain = run_chain_raw(target, {0.0, 0.0, 0.0, 0.0}, cfg);
  for (int k = 0; k < 4; ++k) {
    double m = 0.0;
    for (const auto& s : chain.states) m += s[k];
    m /= chain.states.size();
    CHECK(std::abs(m) < 0.09);
  }
}

TEST_CASE("retention bookkeeping") {
  const auto target = [](std::span<const double> z) {
    return std::make_pair(-0.5 * z[0] * z[0], 0.0);
  };
  SamplerConfig cfg;
  cfg.iterations = 1007;
  cfg.burn_in = 100;
  cfg.thin = 9;
  cfg.seed = 3;
  const auto chain = run_chain_raw(target, {0.0}, cfg);
  // kept at steps 100, 109, ..., <= 1006
  CHECK(chain.states.size() == 101);
  CHECK(chain.values.size() == chain.states.size());
  CHECK(chain.aux.size() == chain.states.size());
}

TEST_CASE("same seed gives a bit-identical chain") {
  const auto target = [](std::span<const double> z) {
    return std::make_pair(-0.5 * z[0] * z[0] - 0.1 * z[0] * z[0] * z[0] * z[0],
                          z[0]);
  };
  SamplerConfig cfg;
  cfg.iterations = 5000;
  cfg.burn_in = 500;
  cfg.thin = 3;
  cfg.seed = 12;
  const auto a = run_chain_raw(target, {0.2}, cfg);
  const auto b = run_chain_raw(target, {0.2}, cfg);
  CHECK(a.states == b.states);
  CHECK(a.values == b.values);
  CHECK(a.acceptance_rate == b.acceptance_rate);
  cfg.seed = 13;
  const auto c = run_chain_raw(target, {0.2}, cfg);
  CHECK(a.states != c.states);
}

TEST_CASE("non-finite start is reported as a numeric error") {
  const auto target = [](std::span<const double>) {
    return std::make_pair(-std::numeric_limits<double>::infinity(), 0.0);
  };
  CHECK_THROWS_AS(run_chain_raw(target, {0.0}, short_cfg(1)), Error);
}

TEST_CASE("moment-matching initialization") {
  // plain case: mean and variance of the uncensored times
  const auto d = make_dataset(
      {{2.0, true}, {4.0, true}, {6.0, true}, {100.0, false}},
      {Family::lognormal, Family::gamma, Family::weibull});
  const auto init = initialize(d);
  CHECK(init.moments.mu == doctest::Approx(4.0));
  CHECK(init.moments.sigma2 == doctest::Approx(4.0));
  CHECK_FALSE(init.degenerate);

  // no events at all: fall back to every time, flag the result
  const auto all_cens = make_dataset(
      {{3.0, false}, {5.0, false}},
      {Family::lognormal, Family::gamma, Family::weibull});
  const auto fb = initialize(all_cens);
  CHECK(fb.moments.mu == doctest::Approx(4.0));
  CHECK(fb.degenerate);
  CHECK(std::isfinite(fb.moments.sigma2));
  CHECK(fb.moments.sigma2 > 0.0);

  // a single event cannot give a variance: fall back to mu^2
  const auto one = make_dataset(
      {{5.0, true}, {9.0, false}},
      {Family::lognormal, Family::gamma, Family::weibull});
  const auto io = initialize(one);
  CHECK(io.moments.mu == doctest::Approx(5.0));
  CHECK(io.moments.sigma2 == doctest::Approx(25.0));
  CHECK(io.degenerate);

  // constant times: zero variance would be invalid, fall back to mu^2
  const auto flat = make_dataset(
      {{7.0, true}, {7.0, true}, {7.0, true}},
      {Family::lognormal, Family::gamma, Family::weibull});
  CHECK(initialize(flat).moments.sigma2 == doctest::Approx(49.0));
}

TEST_CASE("posterior chain stores the exact log posterior per draw") {
  const auto d = small_data(41, 40);
  const auto out = run_chain(d, short_cfg(5));
  REQUIRE(out.draws.size() == 1000);
  CHECK(out.acceptance_rate > 0.0);
  CHECK(out.acceptance_rate < 1.0);
  for (std::size_t i = 0; i < out.draws.size(); i += 10) {
    const auto& dr = out.draws[i];
    dr.params.validate(3);
    CHECK(dr.log_post ==
          doctest::Approx(log_posterior(d, dr.params)).epsilon(1e-10));
  }
}

TEST_CASE("posterior chain is deterministic in the seed") {
  const auto d = small_data(42, 30);
  const auto a = run_chain(d, short_cfg(9));
  const auto b = run_chain(d, short_cfg(9));
  REQUIRE(a.draws.size() == b.draws.size());
  for (std::size_t i = 0; i < a.draws.size(); i += 37) {
    CHECK(a.draws[i].log_post == b.draws[i].log_post);
    CHECK(a.draws[i].params.moments.mu == b.draws[i].params.moments.mu);
  }
}

TEST_CASE("an impossible start surfaces the restart hint") {
  // the huge censored time drives every component survival to zero at the
  // moment-matched start, so the initial posterior is -inf
  const auto d = make_dataset(
      {{1.0, true}, {3.0, true}, {1e280, false}},
      {Family::lognormal, Family::gamma, Family::weibull});
  try {
    run_chain(d, short_cfg(2));
    FAIL("expected a numeric error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::numeric);
    CHECK(std::string(e.what()).find("restart") != std::string::npos);
  }
}
