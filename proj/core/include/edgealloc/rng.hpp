#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace edgealloc {

inline constexpr double kPi = 3.14159265358979323846;

/// splitmix64 step; used to derive independent child seeds from a master
/// seed so that concurrent workers never share a stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

/// Deterministic RNG. Samplers are hand-rolled on top of the raw 64-bit
/// stream so results are identical across standard libraries, which the
/// reproducibility guarantees (byte-identical sweep tables) rely on.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed = 0) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Independent child stream; deterministic in (seed, stream).
  SeededRng derive(std::uint64_t stream) const {
    return SeededRng(mix_seed(seed_, stream));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [lo, hi] inclusive (rejection sampled, unbiased).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  double uniform_range(double lo, double hi) {
    return lo + (hi - lo) * uniform();
  }

  /// Standard normal via Box-Muller (cached second variate).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * kPi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  /// |N(mu, sigma)|.
  double folded_normal(double mu, double sigma) {
    return std::abs(normal(mu, sigma));
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Closed-form mean of the folded normal |N(mu, sigma)|:
/// sigma*sqrt(2/pi)*exp(-mu^2/(2 sigma^2)) + mu*erf(mu/(sigma*sqrt(2))).
inline double folded_normal_mean(double mu, double sigma) {
  if (sigma == 0.0) return std::abs(mu);
  return sigma * std::sqrt(2.0 / kPi) *
             std::exp(-mu * mu / (2.0 * sigma * sigma)) +
         mu * std::erf(mu / (sigma * std::sqrt(2.0)));
}

}  // namespace edgealloc
