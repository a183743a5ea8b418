#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace dnastore {

// Every stochastic stage draws from std::mt19937_64, whose output sequence is fixed by
// the C++ standard. Distributions are implemented here rather than taken from <random>,
// whose distribution algorithms are implementation-defined.
//
//   state seed  = splitmix64(seed ^ splitmix64(nonce + 0x9E3779B97F4A7C15))
//   uniform01   = (next() >> 11) * 2^-53                         in [0, 1)
//   below(m)    = rejection sampling on next() for an unbiased integer in [0, m)
//   gaussian    = Box-Muller on (1 - uniform01, uniform01), both outputs used in order

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t nonce = 0)
      : engine_(splitmix64(seed ^ splitmix64(nonce + 0x9E3779B97F4A7C15ull))) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t m) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % m;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % m;
  }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dnastore
