#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "cyrisk/common/error.hpp"

namespace cyrisk::stats {

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;  // unbiased (n-1 denominator)
};

inline MeanVar mean_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw InvalidParameter("mean_variance: need at least 2 samples");
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return {m, ss / static_cast<double>(xs.size() - 1)};
}

// Normal-approximation 95% half-width for a Bernoulli proportion.
inline double bernoulli_halfwidth(double p_hat, std::uint64_t n) {
  if (n == 0) throw InvalidParameter("bernoulli_halfwidth: n must be positive");
  return 1.96 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

// Linear-interpolation quantile of an already sorted sample.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidParameter("quantile_sorted: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidParameter("quantile_sorted: q outside [0,1]");
  if (sorted.size() == 1) return sorted[0];
  double pos = q * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(pos);
  if (lo >= sorted.size() - 1) return sorted.back();
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace cyrisk::stats
