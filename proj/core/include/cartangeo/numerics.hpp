#pragma once

#include <cstddef>
#include <vector>

namespace cartangeo {

/// Pairwise (cascade) summation; reduction-order stable to ~1e-16 relative.
inline double pairwise_sum(const double* data, size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace cartangeo
