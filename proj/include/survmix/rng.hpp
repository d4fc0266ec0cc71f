#pragma once

#include <cstdint>
#include <random>

namespace survmix {

// Deterministic random stream. The variate transforms are implemented here
// (rather than through std:: distributions, whose algorithms are
// implementation-defined) so that a given seed produces the same sequence on
// every platform and compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0,1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal, Box-Muller; the second deviate of each pair is cached.
  double normal();

  // Gamma variate with given shape and scale (Marsaglia-Tsang squeeze).
  double gamma(double shape, double scale);

  // Exponential variate with the given rate.
  double exponential(double rate) { return -std::log(uniform()) / rate; }

  std::uint64_t next_u64() { return engine_(); }

  // Derives an independent stream seed from (seed, stream index); used to
  // give parallel workers their own deterministic streams.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace survmix
