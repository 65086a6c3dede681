#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

namespace quadric {

/// Counter-based pseudo-random stream. Each (seed, stream) pair yields a
/// fixed sequence independent of platform and thread count, so per-index
/// streams make parallel generation equal to sequential generation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0, 1], 53-bit resolution.
  double uniform01() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (no cached second value).
  double normal() {
    const double u = uniform01();
    const double v = uniform01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
  }

  Eigen::VectorXd gaussian(int dim) {
    Eigen::VectorXd g(dim);
    for (int i = 0; i < dim; ++i) g[i] = normal();
    return g;
  }

  /// Uniform direction on the unit sphere in R^dim.
  Eigen::VectorXd unit_vector(int dim) {
    for (;;) {
      Eigen::VectorXd g = gaussian(dim);
      const double norm = g.norm();
      if (norm > 1e-8) return g / norm;
    }
  }

  static std::uint64_t scramble(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  /// Decorrelated seed for stream `stream` of a base seed.
  static std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return scramble(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
  }

 private:
  std::uint64_t state_;
};

}  // namespace quadric
