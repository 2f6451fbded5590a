#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cyrisk/actuarial.hpp"
#include "cyrisk/common/error.hpp"
#include "cyrisk/common/stats.hpp"

namespace cyrisk::actuarial {

namespace {

// Ruin at premium c happens iff c < max_k (Y_k - y)/t_k on a given path, so
// one simulation sweep yields the whole ruin-vs-premium curve exactly.
std::vector<double> ruin_premium_thresholds(const InsuranceConfig& config,
                                            std::uint64_t paths,
                                            std::uint64_t seed) {
  std::vector<double> thresholds(paths);
  for (std::uint64_t i = 0; i < paths; ++i) {
    SurplusPath path = simulate_surplus_path(config, rng::derive_seed(seed, "path", i));
    double c_star = -std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (std::size_t k = 0; k < path.claim_times.size(); ++k) {
      total += path.claim_amounts[k];
      double need = (total - config.initial_reserve) / path.claim_times[k];
      c_star = std::max(c_star, need);
    }
    thresholds[i] = c_star;
  }
  std::sort(thresholds.begin(), thresholds.end());
  return thresholds;
}

double ruin_fraction(const std::vector<double>& sorted_thresholds, double premium) {
  auto it = std::upper_bound(sorted_thresholds.begin(), sorted_thresholds.end(),
                             premium);
  auto above = static_cast<std::uint64_t>(sorted_thresholds.end() - it);
  return static_cast<double>(above) / static_cast<double>(sorted_thresholds.size());
}

}  // namespace

CalibrationResult calibrate_premium(const InsuranceConfig& config_template,
                                    double target_ruin, std::uint64_t paths,
                                    std::uint64_t seed,
                                    const CalibrationSettings& settings) {
  InsuranceConfig config = config_template;
  config.premium_rate = 0.0;
  config.validate();
  if (!(target_ruin > 0.0 && target_ruin < 1.0))
    throw InvalidParameter("calibrate_premium: target ruin must lie in (0,1)");
  if (!(settings.resolution > 0.0) || !std::isfinite(settings.resolution))
    throw InvalidParameter("calibrate_premium: resolution must be finite and > 0");
  if (!(settings.max_premium > 0.0))
    throw InvalidParameter("calibrate_premium: max_premium must be > 0");
  if (paths < 1) throw InvalidParameter("calibrate_premium: paths must be >= 1");

  // The claim skeleton is premium-independent, so these seeds give common
  // random numbers across every probed rate; the premium threshold per path
  // makes the estimate a right-continuous non-increasing step function.
  std::vector<double> thresholds = ruin_premium_thresholds(config, paths, seed);

  auto estimate_at = [&](double premium) -> RuinEstimate {
    double p = ruin_fraction(thresholds, premium);
    return {p, stats::bernoulli_halfwidth(p, paths), paths, seed};
  };

  CalibrationResult result;
  if (ruin_fraction(thresholds, 0.0) <= target_ruin) {
    result.premium = 0.0;
    result.ruin = estimate_at(0.0);
    result.bracket_low = 0.0;
    return result;
  }

  double lo = 0.0;
  double hi = 1.0;
  while (ruin_fraction(thresholds, hi) > target_ruin) {
    lo = hi;
    hi *= 2.0;
    if (hi > settings.max_premium) {
      double at_cap = ruin_fraction(thresholds, settings.max_premium);
      throw CalibrationFailure(
          "calibrate_premium: ruin " + std::to_string(at_cap) + " at premium cap " +
          std::to_string(settings.max_premium) + " still exceeds target " +
          std::to_string(target_ruin));
    }
  }

  int iterations = 0;
  while (hi - lo >= settings.resolution && iterations < 200) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket already at ulp resolution
    if (ruin_fraction(thresholds, mid) <= target_ruin)
      hi = mid;
    else
      lo = mid;
    ++iterations;
  }

  result.premium = hi;
  result.ruin = estimate_at(hi);
  result.bracket_low = lo;
  result.iterations = iterations;
  return result;
}

}  // namespace cyrisk::actuarial
