#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cyrisk/common/rng.hpp"

namespace cyrisk::actuarial {

struct ClaimDistribution {
  enum class Kind { Deterministic, Exponential };
  Kind kind = Kind::Deterministic;
  double value = 1.0;  // claim amount w, or the exponential mean

  static ClaimDistribution deterministic(double amount);
  static ClaimDistribution exponential(double mean);

  double mean() const { return value; }
  double sample(rng::Engine& g) const;
};

// Compound Poisson surplus model R(t) = y + c*t - sum of claims up to t.
struct InsuranceConfig {
  double initial_reserve = 0.0;  // y, MU
  double premium_rate = 0.0;     // c, aggregate MU per time unit
  double claim_intensity = 0.0;  // lambda, claims per time unit
  double horizon = 1.0;          // T, time units
  ClaimDistribution claims;

  void validate() const;  // throws InvalidParameter naming the field
};

struct SurplusPath {
  double initial_reserve = 0.0;
  double premium_rate = 0.0;
  double horizon = 0.0;
  std::vector<double> claim_times;    // strictly increasing, in [0, T]
  std::vector<double> claim_amounts;
  std::vector<double> reserve_after_claim;  // y + c*t_k - Y_k
  double infimum = 0.0;  // min of y and every post-claim reserve
  bool ruined = false;   // infimum < 0

  double final_reserve() const;
  // Right-continuous reserve level at time t in [0, horizon].
  double reserve_at(double t) const;
};

// Assembles the path record from given claim times/amounts; the infimum is
// exact because the reserve only falls at claim instants.
SurplusPath build_surplus_path(double initial_reserve, double premium_rate,
                               double horizon, std::vector<double> claim_times,
                               std::vector<double> claim_amounts);

// Claim epochs from unit-rate exponential spacings scaled by 1/lambda, so a
// fixed seed yields nested claim sets as lambda grows; amounts come from an
// independent substream. Makes ruin pathwise non-decreasing in lambda under
// common random numbers.
SurplusPath simulate_surplus_path(const InsuranceConfig& config,
                                  std::uint64_t seed);

struct RuinEstimate {
  double probability = 0.0;
  double ci_halfwidth = 0.0;
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;
};

RuinEstimate ruin_probability(const InsuranceConfig& config,
                              std::uint64_t paths, std::uint64_t seed);

struct InfimumDistribution {
  std::vector<double> bin_edges;        // counts.size() + 1, increasing
  std::vector<std::uint64_t> counts;
  std::vector<std::pair<double, double>> quantiles;  // (level, value)
  double prob_below_zero = 0.0;  // equals ruin_probability on the same seed
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;
};

InfimumDistribution infimum_distribution(const InsuranceConfig& config,
                                         std::uint64_t paths, std::uint64_t seed,
                                         std::span<const double> quantile_levels);

struct DeterministicClaimOracle {
  double non_ruin_probability = 0.0;
  double tail_bound = 0.0;  // Poisson mass beyond the truncation
  int truncation = 0;       // largest claim count included
};

inline constexpr int kOracleMaxN = 250;

// Exact finite-time non-ruin probability for Deterministic(w) claims:
// conditional on N_T = n the claim times are uniform order statistics, and
// P(U_(k) >= a_k for all k) with a_k = clamp((k*w - y)/(c*T), 0, inf) follows
// from the Steck/Noe counting recursion. max_n <= 0 picks the smallest
// truncation with Poisson tail < 1e-10 (capped at kOracleMaxN).
DeterministicClaimOracle deterministic_claim_oracle(const InsuranceConfig& config,
                                                    int max_n = 0);

struct CalibrationSettings {
  double resolution = 1e-3;
  double max_premium = 1e6;
};

struct CalibrationResult {
  double premium = 0.0;       // upper bracket end, the returned rate
  RuinEstimate ruin;          // CRN estimate at that rate
  double bracket_low = 0.0;   // ruin there still exceeds the target
  int iterations = 0;
};

// Smallest premium with estimated ruin <= target, by bisection on a single
// set of simulated paths (claim skeletons do not depend on c, so the ruin
// estimate is exactly non-increasing in c). Throws CalibrationFailure when
// the target is not reachable below settings.max_premium.
CalibrationResult calibrate_premium(const InsuranceConfig& config_template,
                                    double target_ruin, std::uint64_t paths,
                                    std::uint64_t seed,
                                    const CalibrationSettings& settings = {});

}  // namespace cyrisk::actuarial
