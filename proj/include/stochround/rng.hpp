#pragma once

#include <cstdint>
#include <vector>

#include "stochround/common.hpp"

namespace stochround {

// xoshiro256++ with splitmix64 seeding.  The standard <random> engines are
// portable but the distributions are not; reports must be byte-identical for
// identical inputs, so uniforms are derived here with fixed arithmetic.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : s_) word = splitmix64(x);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, n); n > 0.  Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  // Index drawn with probability w[i] / sum(w); weights nonnegative.
  int categorical(const std::vector<double>& w) {
    double total = 0;
    for (double x : w) total += x;
    if (total <= 0) throw InternalError("categorical draw with zero total weight");
    double u = uniform01() * total;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      u -= w[i];
      if (u < 0) return static_cast<int>(i);
    }
    return static_cast<int>(w.size()) - 1;
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t s_[4];
};

// Deterministic per-trial stream: a counter-based split of the master seed,
// so trial t sees the same stream no matter how trials are scheduled.
inline Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial, std::uint64_t stream = 0) {
  std::uint64_t x = master_seed;
  std::uint64_t a = Rng::splitmix64(x);
  x ^= 0x517cc1b727220a95ULL * (trial + 1);
  std::uint64_t b = Rng::splitmix64(x);
  x ^= 0x2545f4914f6cdd1dULL * (stream + 1);
  std::uint64_t c = Rng::splitmix64(x);
  return Rng(a ^ b ^ c);
}

}  // namespace stochround
