#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <vector>

namespace depict {

// Counter-based splittable random stream built on the splitmix64 finalizer.
// Every consumer derives its own stream from (seed, path...) so results do
// not depend on evaluation order or worker count. All distributions below
// are implemented from raw bits; none delegate to <random> distributions,
// whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed ^ kPhi)) {}

  // One stream per (seed, path). Distinct paths give statistically
  // independent streams; the same path always gives the same stream.
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix(seed ^ kPhi);
    for (std::uint64_t p : path) s = mix(s ^ mix(p + kPhi));
    return Rng(raw{}, s);
  }

  std::uint64_t next_u64() {
    state_ += kPhi;
    return mix_out(state_);
  }

  // Uniform on [0,1), 53-bit resolution. Exact same double on every platform.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Inclusive bounds.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  double normal(double mean, double stddev) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + stddev * spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return mean + stddev * mag * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Fisher-Yates permutation of 0..n-1.
  std::vector<int> permutation(int n) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(uniform_below(static_cast<std::uint64_t>(i) + 1));
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    return idx;
  }

 private:
  struct raw {};
  Rng(raw, std::uint64_t state) : state_(state) {}

  static constexpr std::uint64_t kPhi = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  static std::uint64_t mix_out(std::uint64_t z) { return mix(z); }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace depict
