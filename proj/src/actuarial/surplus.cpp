#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cyrisk/actuarial.hpp"
#include "cyrisk/common/error.hpp"
#include "cyrisk/common/stats.hpp"

namespace cyrisk::actuarial {

ClaimDistribution ClaimDistribution::deterministic(double amount) {
  if (!(amount > 0.0) || !std::isfinite(amount))
    throw InvalidParameter("claims.amount: must be finite and > 0");
  return {Kind::Deterministic, amount};
}

ClaimDistribution ClaimDistribution::exponential(double mean) {
  if (!(mean > 0.0) || !std::isfinite(mean))
    throw InvalidParameter("claims.mean: must be finite and > 0");
  return {Kind::Exponential, mean};
}

double ClaimDistribution::sample(rng::Engine& g) const {
  return kind == Kind::Deterministic ? value : value * rng::exponential(g);
}

void InsuranceConfig::validate() const {
  if (!(initial_reserve >= 0.0) || !std::isfinite(initial_reserve))
    throw InvalidParameter("initial_reserve: must be finite and >= 0");
  if (!(premium_rate >= 0.0) || !std::isfinite(premium_rate))
    throw InvalidParameter("premium_rate: must be finite and >= 0");
  if (!(claim_intensity >= 0.0) || !std::isfinite(claim_intensity))
    throw InvalidParameter("claim_intensity: must be finite and >= 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw InvalidParameter("horizon: must be finite and > 0");
  if (!(claims.value > 0.0) || !std::isfinite(claims.value))
    throw InvalidParameter("claims: amount/mean must be finite and > 0");
}

namespace {

// Walks one path's claim events in time order. The visitor receives
// (time, running claim sum, amount); claim times are s_k / lambda with s_k
// the partial sums of unit-rate exponentials, amounts from a separate
// stream.
template <typename Visit>
void walk_claims(const InsuranceConfig& config, std::uint64_t seed, Visit&& visit) {
  if (config.claim_intensity <= 0.0) return;
  rng::Engine arrivals(rng::derive_seed(seed, "arrivals"));
  rng::Engine amounts(rng::derive_seed(seed, "amounts"));
  double budget = config.claim_intensity * config.horizon;
  double s = rng::exponential(arrivals);
  double total = 0.0;
  while (s <= budget) {
    double w = config.claims.sample(amounts);
    total += w;
    visit(s / config.claim_intensity, total, w);
    s += rng::exponential(arrivals);
  }
}

}  // namespace

SurplusPath build_surplus_path(double initial_reserve, double premium_rate,
                               double horizon, std::vector<double> claim_times,
                               std::vector<double> claim_amounts) {
  if (claim_times.size() != claim_amounts.size())
    throw InvalidParameter("build_surplus_path: times/amounts size mismatch");
  for (std::size_t k = 0; k < claim_times.size(); ++k) {
    if (!(claim_times[k] >= 0.0) || claim_times[k] > horizon)
      throw InvalidParameter("build_surplus_path: claim time outside [0, horizon]");
    if (k > 0 && !(claim_times[k] > claim_times[k - 1]))
      throw InvalidParameter("build_surplus_path: claim times must be strictly increasing");
  }

  SurplusPath path;
  path.initial_reserve = initial_reserve;
  path.premium_rate = premium_rate;
  path.horizon = horizon;
  path.claim_times = std::move(claim_times);
  path.claim_amounts = std::move(claim_amounts);
  path.reserve_after_claim.reserve(path.claim_times.size());

  double total = 0.0;
  double infimum = initial_reserve;
  for (std::size_t k = 0; k < path.claim_times.size(); ++k) {
    total += path.claim_amounts[k];
    double r = initial_reserve + (premium_rate * path.claim_times[k] - total);
    path.reserve_after_claim.push_back(r);
    infimum = std::min(infimum, r);
  }
  path.infimum = infimum;
  path.ruined = infimum < 0.0;
  return path;
}

SurplusPath simulate_surplus_path(const InsuranceConfig& config,
                                  std::uint64_t seed) {
  config.validate();
  std::vector<double> times, amounts;
  walk_claims(config, seed, [&](double t, double, double w) {
    // s <= lambda*T guarantees t <= T up to division rounding; the nudge
    // covers spacings below one ulp so stored times stay strictly increasing.
    if (t > config.horizon) t = config.horizon;
    if (!times.empty() && t <= times.back())
      t = std::nextafter(times.back(), std::numeric_limits<double>::infinity());
    times.push_back(t);
    amounts.push_back(w);
  });
  return build_surplus_path(config.initial_reserve, config.premium_rate,
                            config.horizon, std::move(times), std::move(amounts));
}

double SurplusPath::final_reserve() const {
  double total = 0.0;
  for (double a : claim_amounts) total += a;
  return initial_reserve + (premium_rate * horizon - total);
}

double SurplusPath::reserve_at(double t) const {
  if (!(t >= 0.0) || t > horizon)
    throw InvalidParameter("reserve_at: t outside [0, horizon]");
  auto it = std::upper_bound(claim_times.begin(), claim_times.end(), t);
  double total = 0.0;
  for (auto i = claim_times.begin(); i != it; ++i)
    total += claim_amounts[static_cast<std::size_t>(i - claim_times.begin())];
  return initial_reserve + (premium_rate * t - total);
}

namespace {

// Infimum only, no path storage; bit-identical to build_surplus_path's
// arithmetic on the same claim sequence.
double path_infimum(const InsuranceConfig& config, std::uint64_t seed) {
  double worst_drift = 0.0;  // min over claims of c*t_k - Y_k, capped at 0
  walk_claims(config, seed, [&](double t, double total, double) {
    double drift = config.premium_rate * t - total;
    if (drift < worst_drift) worst_drift = drift;
  });
  return config.initial_reserve + worst_drift;
}

}  // namespace

RuinEstimate ruin_probability(const InsuranceConfig& config, std::uint64_t paths,
                              std::uint64_t seed) {
  config.validate();
  if (paths < 1) throw InvalidParameter("ruin_probability: paths must be >= 1");
  std::uint64_t ruined = 0;
  for (std::uint64_t i = 0; i < paths; ++i)
    if (path_infimum(config, rng::derive_seed(seed, "path", i)) < 0.0) ++ruined;
  double p = static_cast<double>(ruined) / static_cast<double>(paths);
  return {p, stats::bernoulli_halfwidth(p, paths), paths, seed};
}

InfimumDistribution infimum_distribution(const InsuranceConfig& config,
                                         std::uint64_t paths, std::uint64_t seed,
                                         std::span<const double> quantile_levels) {
  config.validate();
  if (paths < 2) throw InvalidParameter("infimum_distribution: paths must be >= 2");
  for (double q : quantile_levels)
    if (!(q > 0.0 && q < 1.0))
      throw InvalidParameter("infimum_distribution: quantile levels must lie in (0,1)");

  std::vector<double> infima(paths);
  std::uint64_t ruined = 0;
  for (std::uint64_t i = 0; i < paths; ++i) {
    infima[i] = path_infimum(config, rng::derive_seed(seed, "path", i));
    if (infima[i] < 0.0) ++ruined;
  }

  InfimumDistribution out;
  out.paths = paths;
  out.seed = seed;
  out.prob_below_zero = static_cast<double>(ruined) / static_cast<double>(paths);

  auto [lo_it, hi_it] = std::minmax_element(infima.begin(), infima.end());
  double lo = *lo_it, hi = *hi_it;
  std::size_t bins = 64;
  if (lo == hi) {  // e.g. lambda = 0: point mass at y
    double pad = std::max(0.5, std::abs(lo) * 1e-9);
    out.bin_edges = {lo - pad, lo + pad};
    out.counts = {paths};
  } else {
    double width = (hi - lo) / static_cast<double>(bins);
    out.bin_edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b)
      out.bin_edges[b] = lo + width * static_cast<double>(b);
    out.bin_edges.back() = hi;
    out.counts.assign(bins, 0);
    for (double m : infima) {
      auto b = static_cast<std::size_t>((m - lo) / width);
      if (b >= bins) b = bins - 1;
      ++out.counts[b];
    }
  }

  std::sort(infima.begin(), infima.end());
  out.quantiles.reserve(quantile_levels.size());
  for (double q : quantile_levels)
    out.quantiles.emplace_back(q, stats::quantile_sorted(infima, q));
  return out;
}

}  // namespace cyrisk::actuarial
