#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

namespace ospde {

/// Stateless counter-based randomness: every variate is a pure function of
/// (seed, counters...), so parallel path generation is deterministic and
/// independent of scheduling or worker count.
namespace rng {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t chain(std::uint64_t h) { return h; }

template <typename... Rest>
inline std::uint64_t chain(std::uint64_t h, std::uint64_t next, Rest... rest) {
  return chain(splitmix(h ^ (next + 0x9E3779B97F4A7C15ULL)), rest...);
}

/// Uniform in the open interval (0,1); never returns an endpoint.
inline double uniform01(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two derived uniforms.
template <typename... Counters>
inline double gaussian(std::uint64_t seed, Counters... c) {
  const double u1 = uniform01(chain(seed, static_cast<std::uint64_t>(c)..., std::uint64_t{0}));
  const double u2 = uniform01(chain(seed, static_cast<std::uint64_t>(c)..., std::uint64_t{1}));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace rng

/// Brownian increments over a uniform time mesh: increments(m, j) is
/// Delta B^j on step m, N(0, dt) i.i.d. under the per-path seed. Identical
/// (base_seed, path_index) reproduces the path bit for bit.
struct NoisePath {
  std::uint64_t seed = 0;
  double dt = 0;
  Eigen::MatrixXd increments;  // steps x channels

  int steps() const { return static_cast<int>(increments.rows()); }
  int channels() const { return static_cast<int>(increments.cols()); }

  static NoisePath generate(std::uint64_t base_seed, std::uint64_t path_index, int steps,
                            int channels, double dt) {
    NoisePath p;
    p.seed = rng::chain(base_seed, path_index);
    p.dt = dt;
    p.increments.resize(steps, channels);
    const double sd = std::sqrt(dt);
    for (int m = 0; m < steps; ++m)
      for (int j = 0; j < channels; ++j)
        p.increments(m, j) = sd * rng::gaussian(p.seed, static_cast<std::uint64_t>(m),
                                                static_cast<std::uint64_t>(j));
    return p;
  }
};

}  // namespace ospde
