#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace whsim {

// Deterministic generator with hand-written variate transforms. The standard
// <random> distributions are implementation-defined, so only the engine is
// taken from the library; everything on top is portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0x5eedULL) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Rejection sampling removes modulo bias.
  std::uint64_t below(std::uint64_t n);

  // Standard normal via Box-Muller; the spare variate is cached.
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // exp(N(mu, sigma)). sigma == 0 yields exactly exp(mu).
  double lognormal(double mu, double sigma);

  // Index drawn from an unnormalized discrete weight vector.
  template <typename Range>
  std::size_t discrete(const Range& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform() * total;
    std::size_t i = 0;
    std::size_t last = 0;
    for (double w : weights) {
      if (w > 0.0) {
        last = i;
        if (u < w) return i;
        u -= w;
      }
      ++i;
    }
    return last;
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer, used to derive well-separated seeds.
std::uint64_t mix64(std::uint64_t x);

// FNV-1a over the bytes of a name.
std::uint64_t hash_name(std::string_view name);

// Seed for stream `name` of replication `replication` under `master_seed`.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view name,
                          std::uint64_t replication);

}  // namespace whsim
