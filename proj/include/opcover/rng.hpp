#ifndef OPCOVER_RNG_HPP
#define OPCOVER_RNG_HPP

// Seedable, splittable pseudo-random generation.  Streams are derived from a
// 64-bit seed with SplitMix64 and driven by xoshiro256**; `split(i)` yields an
// independent child stream as a pure function of (seed, i), so per-trial
// streams do not depend on execution order.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "opcover/error.hpp"

namespace opcover {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for stream `index` of `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0xd1b54a32d192ed03ULL * (index + 1));
  splitmix64(s);
  return splitmix64(s);
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  std::uint64_t seed() const { return seed_; }
  Rng split(std::uint64_t index) const { return Rng(derive_seed(seed_, index)); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double normal() {
    // Box–Muller; one draw per call keeps the stream layout trivial.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  std::size_t index_below(std::size_t n) {
    require(n > 0, ErrorKind::invalid_argument, "index_below(0)");
    // Lemire-free rejection: exact uniformity.
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  /// Draws an index from a discrete distribution (weights need not be normalized).
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    require(total > 0.0, ErrorKind::invalid_argument, "categorical with zero total weight");
    double u = uniform() * total;
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      last = i;
      if (u < weights[i]) return i;
      u -= weights[i];
    }
    return last;
  }

  /// Binomial(n, p) draw.
  std::uint64_t binomial(std::uint64_t n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    std::binomial_distribution<std::int64_t> dist(static_cast<std::int64_t>(n), p);
    return static_cast<std::uint64_t>(dist(*this));
  }

  /// Counts of `n` i.i.d. categorical draws, sampled as sequential conditional
  /// binomials (distributionally identical to drawing one by one).
  std::vector<std::uint64_t> multinomial(std::uint64_t n, std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += std::max(0.0, w);
    require(total > 0.0, ErrorKind::invalid_argument, "multinomial with zero total weight");
    std::vector<std::uint64_t> counts(weights.size(), 0);
    std::uint64_t remaining = n;
    double mass_left = total;
    for (std::size_t i = 0; i < weights.size() && remaining > 0; ++i) {
      const double w = std::max(0.0, weights[i]);
      if (w <= 0.0) continue;
      const double p = mass_left > 0.0 ? std::min(1.0, w / mass_left) : 1.0;
      const std::uint64_t c = (i + 1 == weights.size()) ? remaining : binomial(remaining, p);
      counts[i] = c;
      remaining -= c;
      mass_left -= w;
    }
    if (remaining > 0) {
      // Rounding left the tail mass at zero; assign to the last positive weight.
      for (std::size_t i = weights.size(); i-- > 0;)
        if (weights[i] > 0.0) {
          counts[i] += remaining;
          break;
        }
    }
    return counts;
  }

  /// Haar-ish random complex unit vector.
  Eigen::VectorXcd unit_vector(int dim) {
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = std::complex<double>(normal(), normal());
    return v / v.norm();
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace opcover

#endif  // OPCOVER_RNG_HPP
