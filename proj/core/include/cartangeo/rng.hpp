#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "cartangeo/lie_algebra.hpp"

namespace cartangeo {

/// Deterministic random source. Uniform and normal draws are derived from raw
/// mt19937_64 words (no std::*_distribution), so streams are identical across
/// standard libraries for a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {
    return (eng_() >> 11) * 0x1.0p-53;  // 53 random bits in [0,1)
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    // Box-Muller; one value per pair keeps the stream simple.
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  Vec vector(int dim, double scale = 1.0) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = scale * normal();
    return v;
  }

  Mat matrix(int r, int c, double scale = 1.0) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = scale * normal();
    return m;
  }

  Mat symmetric(int dim, double scale = 1.0) {
    Mat m = matrix(dim, dim, scale);
    return 0.5 * (m + m.transpose());
  }

  /// Symmetric with eigenvalues bounded away from zero (diagonal shift).
  Mat symmetric_nondegenerate(int dim, double scale = 1.0) {
    return symmetric(dim, scale) + scale * dim * Mat::Identity(dim, dim);
  }

  Mat antisymmetric(int dim, double scale = 1.0) {
    Mat m = matrix(dim, dim, scale);
    return 0.5 * (m - m.transpose());
  }

  /// Random H-type data with the given split.
  HTypeSpec htype(int n, int m, double scale = 1.0) {
    HTypeSpec spec;
    spec.n = n;
    spec.m = m;
    for (int q = 0; q < m; ++q) spec.gamma.push_back(antisymmetric(n, scale));
    return spec;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace cartangeo
