#pragma once

// Seeded sampling used by every audit. The generator and the ball-sampling
// recipe are part of the external contract (witnesses must be reproducible
// across implementations), so both are spelled out here and in the README:
//
//   * SplitMix64: state += 0x9E3779B97F4A7C15; z = state;
//     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//     z = (z ^ (z >> 27)) * 0x94D049BB133111EB;  output z ^ (z >> 31).
//   * uniform01 = (output >> 11) * 2^-53, in [0, 1).
//   * gaussian: Box-Muller, z = sqrt(-2 ln(1-u1)) * cos(2 pi u2).
//   * point uniform in the ball B(c, r) of R^n: direction = n gaussians
//     normalized, radius = r * u^(1/n), one uniform u drawn after the
//     gaussians.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "fejer/core.hpp"

namespace fejer {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (one draw per call, two uniforms).
  double gaussian() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::uint64_t state_;
};

/// Uniform sample in a closed ball: gaussian direction + radius^(1/n) scaling.
inline Vector sample_in_ball(const ClosedBall& ball, SplitMix64& rng) {
  const std::size_t n = ball.center.dim();
  if (n == 0) throw std::invalid_argument("sample_in_ball: empty center");
  std::vector<double> dir(n);
  double nrm = 0.0;
  do {
    nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dir[i] = rng.gaussian();
      nrm += dir[i] * dir[i];
    }
    nrm = std::sqrt(nrm);
  } while (nrm < 1e-300);
  const double u = rng.uniform01();
  const double radius =
      ball.radius * std::pow(u, 1.0 / static_cast<double>(n));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = ball.center[i] + radius * dir[i] / nrm;
  }
  return Vector(std::move(out));
}

/// Ball sample restricted to a domain predicate by rejection. Deterministic
/// given the generator state; throws if the domain looks unreachable.
template <typename DomainPred>
Vector sample_in_ball_domain(const ClosedBall& ball, DomainPred&& in_domain,
                             SplitMix64& rng, int max_rejects = 10000) {
  for (int k = 0; k < max_rejects; ++k) {
    Vector x = sample_in_ball(ball, rng);
    if (in_domain(x)) return x;
  }
  throw std::runtime_error(
      "sample_in_ball_domain: rejection cap reached; ball misses the domain");
}

}  // namespace fejer
