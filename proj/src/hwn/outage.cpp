#include <algorithm>
#include <cmath>
#include <limits>

#include "cyrisk/common/rng.hpp"
#include "cyrisk/common/stats.hpp"
#include "cyrisk/hwn.hpp"

namespace cyrisk::hwn {

namespace {

OutageEstimate make_estimate(std::uint64_t outages, std::uint64_t trials,
                             std::uint64_t seed) {
  double p = static_cast<double>(outages) / static_cast<double>(trials);
  return {p, stats::bernoulli_halfwidth(p, trials), trials, seed};
}

// SINR for one fresh realization; nullopt when no tier produced a BS.
std::optional<double> trial_sinr(const NetworkConfig& config,
                                 std::uint64_t master_seed, std::uint64_t trial) {
  NetworkRealization r =
      realize_network(config, rng::derive_seed(master_seed, "geom", trial));
  if (!r.serving) return std::nullopt;
  return sinr_sample(r, config, rng::derive_seed(master_seed, "fade", trial));
}

}  // namespace

OutageEstimate estimate_outage(const NetworkConfig& config,
                               std::uint64_t trials, std::uint64_t seed) {
  config.validate();
  if (trials < 1) throw InvalidParameter("estimate_outage: trials must be >= 1");
  double tau = db_to_linear(config.sinr_threshold_db);
  std::uint64_t outages = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto sinr = trial_sinr(config, seed, i);
    if (!sinr || *sinr < tau) ++outages;
  }
  return make_estimate(outages, trials, seed);
}

std::vector<OutageEstimate> estimate_outage_multi_tau(
    const NetworkConfig& config, std::span<const double> tau_db,
    std::uint64_t trials, std::uint64_t seed) {
  config.validate();
  if (trials < 1) throw InvalidParameter("estimate_outage_multi_tau: trials must be >= 1");
  if (tau_db.empty())
    throw InvalidParameter("estimate_outage_multi_tau: need at least one threshold");
  std::vector<double> tau_lin(tau_db.size());
  for (std::size_t t = 0; t < tau_db.size(); ++t) tau_lin[t] = db_to_linear(tau_db[t]);

  std::vector<std::uint64_t> outages(tau_db.size(), 0);
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto sinr = trial_sinr(config, seed, i);
    for (std::size_t t = 0; t < tau_lin.size(); ++t)
      if (!sinr || *sinr < tau_lin[t]) ++outages[t];
  }
  std::vector<OutageEstimate> out;
  out.reserve(tau_db.size());
  for (std::uint64_t n : outages) out.push_back(make_estimate(n, trials, seed));
  return out;
}

std::vector<OutageEstimate> estimate_outage_jammer_sweep(
    const NetworkConfig& config, std::span<const double> densities,
    std::uint64_t trials, std::uint64_t seed) {
  config.validate();
  if (!config.jammers)
    throw InvalidParameter("estimate_outage_jammer_sweep: config has no jammer block");
  if (trials < 1)
    throw InvalidParameter("estimate_outage_jammer_sweep: trials must be >= 1");
  if (densities.empty())
    throw InvalidParameter("estimate_outage_jammer_sweep: need at least one density");
  for (double z : densities)
    if (!(z >= 0.0) || !std::isfinite(z))
      throw InvalidParameter("estimate_outage_jammer_sweep: densities must be finite and >= 0");

  double z_max = *std::max_element(densities.begin(), densities.end());
  const JammerConfig& jam = *config.jammers;
  double jam_power = dbm_to_mw(jam.power_dbm);
  double mu_j = jam.pathloss_exponent;
  double tau = db_to_linear(config.sinr_threshold_db);
  double window_r2 = config.window.radius * config.window.radius;

  // Tier geometry is drawn without the jammer block so its streams match
  // realize_network exactly; the jammer field comes from one master pattern
  // per trial, reused across every density.
  NetworkConfig tier_only = config;
  tier_only.jammers.reset();

  std::vector<std::uint64_t> outages(densities.size(), 0);

  for (std::uint64_t i = 0; i < trials; ++i) {
    std::uint64_t geom_seed = rng::derive_seed(seed, "geom", i);
    std::uint64_t fade_seed = rng::derive_seed(seed, "fade", i);
    NetworkRealization r = realize_network(tier_only, geom_seed);
    if (!r.serving) {
      for (auto& n : outages) ++n;
      continue;
    }

    // sinr_sample's stream, consumed in its order: serving fade, active tier
    // interferers, then one fade per jammer candidate.
    rng::Engine fade(rng::derive_seed(fade_seed, "fading"));
    const ServingBs& s = *r.serving;
    double signal = dbm_to_mw(config.tiers[s.tier].power_dbm) *
                    rng::exponential(fade) *
                    std::pow(s.distance, -config.tiers[s.tier].pathloss_exponent);
    double base = config.noise_dbm ? dbm_to_mw(*config.noise_dbm) : 0.0;
    for (std::size_t k = 0; k < r.tier_patterns.size(); ++k) {
      double power = dbm_to_mw(config.tiers[k].power_dbm);
      double mu = config.tiers[k].pathloss_exponent;
      const auto& pts = r.tier_patterns[k].points;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (k == s.tier && j == s.index) continue;
        if (!r.active[k][j]) continue;
        double d = std::sqrt(pts[j].x * pts[j].x + pts[j].y * pts[j].y);
        base += power * rng::exponential(fade) * std::pow(d, -mu);
      }
    }

    // Master jammer field at the top density, with the stream labels a direct
    // draw would use, reduced to the candidate points a direct draw would
    // keep: post-thinning for the Ginibre branch, everything for Poisson
    // (where nested thinning marks drive the density cut instead).
    std::uint64_t jam_seed = rng::derive_seed(geom_seed, "jammer");
    geometry::PointPattern master;
    std::vector<double> keep_mark;
    if (jam.alpha) {
      geometry::PointPattern parent =
          geometry::sample_ginibre(z_max / *jam.alpha, config.window,
                                   rng::derive_seed(jam_seed, "ginibre"));
      rng::Engine thin(rng::derive_seed(jam_seed, "thin"));
      master.window = config.window;
      for (const auto& p : parent.points)
        if (rng::uniform01(thin) < *jam.alpha) master.points.push_back(p);
    } else {
      master = geometry::sample_ppp(geometry::ProcessSpec::ppp(z_max),
                                    config.window, jam_seed);
      rng::Engine thin(rng::derive_seed(jam_seed, "thin"));
      keep_mark.resize(master.points.size());
      for (auto& u : keep_mark) u = rng::uniform01(thin);
    }

    std::vector<double> term(master.points.size());
    std::vector<double> dist2(master.points.size());
    for (std::size_t j = 0; j < master.points.size(); ++j) {
      const auto& p = master.points[j];
      double d2 = p.x * p.x + p.y * p.y;
      dist2[j] = d2;
      term[j] = jam_power * rng::exponential(fade) * std::pow(std::sqrt(d2), -mu_j);
    }

    for (std::size_t zi = 0; zi < densities.size(); ++zi) {
      double z = densities[zi];
      double denom = base;
      if (z > 0.0 && z_max > 0.0) {
        if (jam.alpha) {
          // Dilate the master by sqrt(z_max/z): the alpha-Ginibre family is
          // closed under scaling, so the marginal law at density z is exact.
          // Larger z means a larger cut and a larger factor, so the
          // denominator is non-decreasing in z term by term. At z = z_max the
          // cut is the window test itself and the factor is exactly 1.
          double ratio = z / z_max;
          double factor = std::pow(ratio, 0.5 * mu_j);  // (s*d)^-mu = factor * d^-mu
          double cut2 = window_r2 * ratio;
          for (std::size_t j = 0; j < term.size(); ++j)
            if (dist2[j] <= cut2) denom += factor * term[j];
        } else {
          // Poisson: nested thinning of the master with retention z/z_max.
          double retain = z / z_max;
          for (std::size_t j = 0; j < term.size(); ++j)
            if (keep_mark[j] < retain) denom += term[j];
        }
      }
      double sinr = denom == 0.0 ? std::numeric_limits<double>::infinity()
                                 : signal / denom;
      if (sinr < tau) ++outages[zi];
    }
  }

  std::vector<OutageEstimate> out;
  out.reserve(densities.size());
  for (std::uint64_t n : outages) out.push_back(make_estimate(n, trials, seed));
  return out;
}

ConvergenceCheck convergence_check(const NetworkConfig& config,
                                   std::uint64_t trials, std::uint64_t seed) {
  NetworkConfig doubled = config;
  doubled.window.radius *= 2.0;
  ConvergenceCheck out;
  out.at_radius = estimate_outage(config, trials, rng::derive_seed(seed, "radius-base"));
  out.at_double_radius =
      estimate_outage(doubled, trials, rng::derive_seed(seed, "radius-doubled"));
  out.delta = std::abs(out.at_radius.probability - out.at_double_radius.probability);
  return out;
}

}  // namespace cyrisk::hwn
