#include <cmath>
#include <limits>
#include <string>

#include "cyrisk/common/rng.hpp"
#include "cyrisk/hwn.hpp"

namespace cyrisk::hwn {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

namespace {

geometry::ProcessSpec make_spec(double density, const std::optional<double>& alpha) {
  return alpha ? geometry::ProcessSpec::alpha_ginibre(density, *alpha)
               : geometry::ProcessSpec::ppp(density);
}

void validate_field(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw InvalidParameter(field + ": " + what);
}

}  // namespace

geometry::ProcessSpec TierConfig::process_spec() const {
  return make_spec(density, alpha);
}

geometry::ProcessSpec JammerConfig::process_spec() const {
  return make_spec(density, alpha);
}

void NetworkConfig::validate() const {
  validate_field(!tiers.empty(), "tiers", "need at least one tier");
  for (std::size_t k = 0; k < tiers.size(); ++k) {
    const auto& t = tiers[k];
    std::string base = "tiers[" + std::to_string(k) + "].";
    validate_field(std::isfinite(t.power_dbm), base + "power_dbm", "must be finite");
    validate_field(t.density >= 0.0 && std::isfinite(t.density), base + "density",
                   "must be finite and >= 0");
    validate_field(t.pathloss_exponent > 2.0 && std::isfinite(t.pathloss_exponent),
                   base + "pathloss_exponent", "must be finite and > 2");
    if (t.alpha)
      validate_field(*t.alpha > 0.0 && *t.alpha <= 1.0, base + "alpha",
                     "must lie in (0,1]");
  }
  if (jammers) {
    const auto& j = *jammers;
    validate_field(std::isfinite(j.power_dbm), "jammers.power_dbm", "must be finite");
    validate_field(j.density >= 0.0 && std::isfinite(j.density), "jammers.density",
                   "must be finite and >= 0");
    validate_field(j.pathloss_exponent > 2.0 && std::isfinite(j.pathloss_exponent),
                   "jammers.pathloss_exponent", "must be finite and > 2");
    if (j.alpha)
      validate_field(*j.alpha > 0.0 && *j.alpha <= 1.0, "jammers.alpha",
                     "must lie in (0,1]");
  }
  validate_field(reuse_factor > 0.0 && reuse_factor <= 1.0, "reuse_factor",
                 "must lie in (0,1]");
  if (noise_dbm)
    validate_field(std::isfinite(*noise_dbm), "noise_dbm", "must be finite");
  validate_field(std::isfinite(sinr_threshold_db), "sinr_threshold_db",
                 "must be finite");
  validate_field(window.radius > 0.0 && std::isfinite(window.radius),
                 "window.radius", "must be finite and > 0");
  validate_field(user_count >= 1, "user_count", "must be >= 1");
}

Association associate(std::span<const std::optional<double>> nearest,
                      std::span<const TierConfig> tiers) {
  if (nearest.size() != tiers.size())
    throw InvalidParameter("associate: one candidate slot per tier required");
  bool found = false;
  std::size_t best_tier = 0;
  double best_distance = 0.0;
  double best_power = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tiers.size(); ++k) {
    if (!nearest[k]) continue;
    double r = *nearest[k];
    if (!(r >= 0.0)) throw InvalidParameter("associate: negative candidate distance");
    // Fading averages out: rank tiers by P_k * r^(-mu_k), linear power.
    double avg_power =
        dbm_to_mw(tiers[k].power_dbm) * std::pow(r, -tiers[k].pathloss_exponent);
    if (!found || avg_power > best_power) {
      found = true;
      best_tier = k;
      best_distance = r;
      best_power = avg_power;
    }
  }
  if (!found) throw NoCoverage("associate: every tier is empty");
  return {best_tier, best_distance};
}

NetworkRealization realize_network(const NetworkConfig& config,
                                   std::uint64_t seed) {
  config.validate();

  NetworkRealization out;
  out.tier_patterns.reserve(config.tiers.size());
  for (std::size_t k = 0; k < config.tiers.size(); ++k) {
    out.tier_patterns.push_back(geometry::sample(config.tiers[k].process_spec(),
                                                 config.window,
                                                 rng::derive_seed(seed, "tier", k)));
  }
  if (config.jammers) {
    out.jammer_pattern = geometry::sample(config.jammers->process_spec(),
                                          config.window,
                                          rng::derive_seed(seed, "jammer"));
  }

  std::vector<std::optional<double>> nearest(config.tiers.size());
  std::vector<std::size_t> nearest_index(config.tiers.size(), 0);
  for (std::size_t k = 0; k < config.tiers.size(); ++k) {
    const auto& pts = out.tier_patterns[k].points;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      double d = std::sqrt(pts[j].x * pts[j].x + pts[j].y * pts[j].y);
      if (!nearest[k] || d < *nearest[k]) {
        nearest[k] = d;
        nearest_index[k] = j;
      }
    }
  }

  // One activity draw per BS regardless of which one ends up serving, so the
  // stream stays aligned across coupled scenarios.
  rng::Engine act(rng::derive_seed(seed, "activity"));
  out.active.resize(config.tiers.size());
  for (std::size_t k = 0; k < config.tiers.size(); ++k) {
    out.active[k].resize(out.tier_patterns[k].points.size());
    for (auto& flag : out.active[k])
      flag = rng::uniform01(act) < config.reuse_factor ? 1 : 0;
  }

  try {
    Association a = associate(nearest, config.tiers);
    out.serving = ServingBs{a.tier, nearest_index[a.tier], a.distance};
    out.active[a.tier][nearest_index[a.tier]] = 1;
  } catch (const NoCoverage&) {
    out.serving.reset();
  }
  return out;
}

double sinr_sample(const NetworkRealization& realization,
                   const NetworkConfig& config, std::uint64_t seed) {
  if (!realization.serving)
    throw NoCoverage("sinr_sample: realization has no serving BS");
  const ServingBs& s = *realization.serving;

  rng::Engine fade(rng::derive_seed(seed, "fading"));
  double mu_s = config.tiers[s.tier].pathloss_exponent;
  double signal = dbm_to_mw(config.tiers[s.tier].power_dbm) *
                  rng::exponential(fade) * std::pow(s.distance, -mu_s);

  double denom = config.noise_dbm ? dbm_to_mw(*config.noise_dbm) : 0.0;
  for (std::size_t k = 0; k < realization.tier_patterns.size(); ++k) {
    double power = dbm_to_mw(config.tiers[k].power_dbm);
    double mu = config.tiers[k].pathloss_exponent;
    const auto& pts = realization.tier_patterns[k].points;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (k == s.tier && j == s.index) continue;
      if (!realization.active[k][j]) continue;
      double d = std::sqrt(pts[j].x * pts[j].x + pts[j].y * pts[j].y);
      denom += power * rng::exponential(fade) * std::pow(d, -mu);
    }
  }
  if (realization.jammer_pattern && config.jammers) {
    double power = dbm_to_mw(config.jammers->power_dbm);
    double mu = config.jammers->pathloss_exponent;
    for (const auto& p : realization.jammer_pattern->points) {
      double d = std::sqrt(p.x * p.x + p.y * p.y);
      denom += power * rng::exponential(fade) * std::pow(d, -mu);
    }
  }

  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return signal / denom;
}

}  // namespace cyrisk::hwn
