#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cyrisk/geometry.hpp"

namespace cyrisk::hwn {

// dBm -> linear milliwatts.
double dbm_to_mw(double dbm);
// dB ratio -> linear ratio.
double db_to_linear(double db);

// One network tier: transmit power in dBm, BS density, repulsion alpha
// (nullopt = Poisson), path-loss exponent (> 2 for finite far-field
// interference).
struct TierConfig {
  double power_dbm = 0.0;
  double density = 0.0;
  std::optional<double> alpha;  // nullopt -> PPP
  double pathloss_exponent = 4.0;

  geometry::ProcessSpec process_spec() const;
};

struct JammerConfig {
  double power_dbm = 0.0;
  double density = 0.0;
  std::optional<double> alpha;
  double pathloss_exponent = 4.0;

  geometry::ProcessSpec process_spec() const;
};

struct NetworkConfig {
  std::vector<TierConfig> tiers;
  std::optional<JammerConfig> jammers;
  double reuse_factor = 1.0;              // xi in (0,1]
  std::optional<double> noise_dbm;        // nullopt -> interference-limited
  double sinr_threshold_db = 0.0;
  geometry::Window window{1.0};
  std::uint64_t user_count = 1;

  // Throws InvalidParameter naming the offending field.
  void validate() const;
};

struct ServingBs {
  std::size_t tier = 0;
  std::size_t index = 0;  // position within the tier's pattern
  double distance = 0.0;
};

// One snapshot of the network as seen by the probe user at the origin:
// geometry, the chosen serving BS (absent when every tier came up empty),
// and per-BS activity flags after Bernoulli(xi) thinning. The serving BS is
// always flagged active and never counted as an interferer.
struct NetworkRealization {
  std::vector<geometry::PointPattern> tier_patterns;
  std::optional<geometry::PointPattern> jammer_pattern;
  std::optional<ServingBs> serving;
  std::vector<std::vector<std::uint8_t>> active;
};

NetworkRealization realize_network(const NetworkConfig& config,
                                   std::uint64_t seed);

struct Association {
  std::size_t tier = 0;
  double distance = 0.0;
};

// Max average received power rule: argmax_k P_k * r_k^(-mu_k) over tiers
// with a candidate; ties go to the lower tier index. Throws NoCoverage when
// no tier has one.
Association associate(std::span<const std::optional<double>> nearest,
                      std::span<const TierConfig> tiers);

// Draws Rayleigh fading on every active transmitter and returns the linear
// SINR at the origin; +infinity when the denominator is exactly zero.
// Requires realization.serving.
double sinr_sample(const NetworkRealization& realization,
                   const NetworkConfig& config, std::uint64_t seed);

struct OutageEstimate {
  double probability = 0.0;
  double ci_halfwidth = 0.0;  // 95% normal approximation
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// P(SINR < tau or no coverage) over independent trials, fresh geometry and
// fading per trial. Deterministic in (config, trials, seed).
OutageEstimate estimate_outage(const NetworkConfig& config,
                               std::uint64_t trials, std::uint64_t seed);

// One pass, many thresholds: per-trial SINR is computed once and compared
// against every threshold, so estimates are coupled and non-decreasing in
// tau by construction.
std::vector<OutageEstimate> estimate_outage_multi_tau(
    const NetworkConfig& config, std::span<const double> tau_db,
    std::uint64_t trials, std::uint64_t seed);

// Jammer-density sweep on common random numbers. Tiers, association,
// activity and fading are shared across all densities within a trial; the
// jammer field is one master pattern sampled at the largest density and
// dilated outward for smaller ones, which preserves the marginal law of the
// (alpha-)Ginibre family and makes interference pointwise non-decreasing in
// density. Returned estimates are therefore non-decreasing with zero
// violations. Requires config.jammers; its density field is ignored in
// favour of `densities`.
std::vector<OutageEstimate> estimate_outage_jammer_sweep(
    const NetworkConfig& config, std::span<const double> densities,
    std::uint64_t trials, std::uint64_t seed);

struct JammerOracleTerm {
  double density = 0.0;
  double power_mw = 0.0;
  double pathloss_exponent = 4.0;
};

struct ServingOracleTerm {
  double power_mw = 1.0;
  double density = 1.0;
};

// rho(tau, mu) = tau^(2/mu) * integral from tau^(-2/mu) to infinity of
// du / (1 + u^(mu/2)). Relative error < 1e-9.
double rho_integral(double tau_linear, double mu);

// Coverage probability of the typical user in a single interference-limited
// PPP tier (xi = 1, Rayleigh fading): 1/(1+rho) without jammers; with a PPP
// jammer field the shot-noise Laplace term is folded into the serving
// distance integral. tau is linear here.
double ppp_coverage_oracle(double tau_linear, double mu,
                           const std::optional<JammerOracleTerm>& jammers,
                           const ServingOracleTerm& serving);

struct ConvergenceCheck {
  OutageEstimate at_radius;
  OutageEstimate at_double_radius;
  double delta = 0.0;
};

// Window truncation control: same estimator at R and 2R; small delta means
// the window already captures the interference field.
ConvergenceCheck convergence_check(const NetworkConfig& config,
                                   std::uint64_t trials, std::uint64_t seed);

}  // namespace cyrisk::hwn
