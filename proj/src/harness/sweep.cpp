#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cyrisk/common/csv.hpp"
#include "cyrisk/common/error.hpp"
#include "cyrisk/common/rng.hpp"
#include "cyrisk/harness.hpp"

namespace cyrisk::harness {

SweepAxis parse_axis(std::string_view name) {
  if (name == "zeta_j") return SweepAxis::JammerDensity;
  if (name == "alpha_j") return SweepAxis::JammerAlpha;
  if (name == "premium_rate") return SweepAxis::PremiumRate;
  if (name == "tau") return SweepAxis::SinrThreshold;
  throw ConfigError("sweep axis: unknown axis '" + std::string(name) +
                    "' (want zeta_j, alpha_j, premium_rate, or tau)");
}

std::string SweepTable::csv() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

namespace {

const std::vector<std::string> kOutageHeader = {"zeta_j",       "alpha_j",
                                                "outage",       "ci_halfwidth",
                                                "trials",       "seed"};
const std::vector<std::string> kOutageFullHeader = {
    "zeta_j", "alpha_j", "outage", "outage_ci_halfwidth", "lambda",
    "ruin",   "ruin_ci_halfwidth", "trials", "paths",      "seed"};
const std::vector<std::string> kTauHeader = {"tau_db", "outage", "ci_halfwidth",
                                             "trials", "seed"};
const std::vector<std::string> kTauFullHeader = {
    "tau_db", "outage", "outage_ci_halfwidth", "lambda",
    "ruin",   "ruin_ci_halfwidth", "trials",   "paths", "seed"};
const std::vector<std::string> kPremiumHeader = {"premium_rate", "lambda",
                                                 "ruin",         "ci_halfwidth",
                                                 "paths",        "seed"};

// Ruin stage for one sweep row. Every row shares the same derived seed: the
// claim skeleton construction makes ruin pathwise monotone in lambda and in
// the premium under common random numbers.
actuarial::RuinEstimate row_ruin(const ScenarioConfig& config, double lambda,
                                 std::uint64_t ruin_seed) {
  return actuarial::ruin_probability(config.insurance(lambda), config.paths,
                                     ruin_seed);
}

void append_outage_row(SweepTable& table, const ScenarioConfig& config,
                       double zeta, double alpha, const hwn::OutageEstimate& est,
                       bool outage_only, std::uint64_t ruin_seed) {
  std::vector<std::string> row;
  row.push_back(csv::num(zeta));
  row.push_back(csv::num(alpha));
  row.push_back(csv::num(est.probability));
  if (outage_only) {
    row.push_back(csv::num(est.ci_halfwidth));
    row.push_back(csv::num(est.trials));
    row.push_back(csv::num(config.seed));
  } else {
    double lambda =
        est.probability * static_cast<double>(config.network.user_count);
    actuarial::RuinEstimate ruin = row_ruin(config, lambda, ruin_seed);
    row.push_back(csv::num(est.ci_halfwidth));
    row.push_back(csv::num(lambda));
    row.push_back(csv::num(ruin.probability));
    row.push_back(csv::num(ruin.ci_halfwidth));
    row.push_back(csv::num(est.trials));
    row.push_back(csv::num(ruin.paths));
    row.push_back(csv::num(config.seed));
  }
  table.rows.push_back(std::move(row));
}

}  // namespace

SweepTable sweep(const ScenarioConfig& config, SweepAxis axis,
                 std::span<const double> values, bool outage_only) {
  config.validate();
  if (values.empty()) throw ConfigError("sweep: need at least one value");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted)
    if (!std::isfinite(v)) throw ConfigError("sweep: values must be finite");
  std::sort(sorted.begin(), sorted.end());

  std::uint64_t outage_seed = rng::derive_seed(config.seed, "outage");
  std::uint64_t ruin_seed = rng::derive_seed(config.seed, "ruin");

  SweepTable table;
  switch (axis) {
    case SweepAxis::JammerDensity: {
      if (!config.network.jammers)
        throw ConfigError("sweep.zeta_j: config has no jammer block");
      if (sorted.front() < 0.0)
        throw ConfigError("sweep.zeta_j: densities must be >= 0");
      table.header = outage_only ? kOutageHeader : kOutageFullHeader;
      double alpha_cell = config.network.jammers->alpha
                              ? *config.network.jammers->alpha
                              : 0.0;
      std::vector<hwn::OutageEstimate> ests = hwn::estimate_outage_jammer_sweep(
          config.network, sorted, config.trials, outage_seed);
      for (std::size_t i = 0; i < sorted.size(); ++i)
        append_outage_row(table, config, sorted[i], alpha_cell, ests[i],
                          outage_only, ruin_seed);
      break;
    }
    case SweepAxis::JammerAlpha: {
      if (!config.network.jammers)
        throw ConfigError("sweep.alpha_j: config has no jammer block");
      table.header = outage_only ? kOutageHeader : kOutageFullHeader;
      for (double a : sorted) {
        if (!(a >= 0.0 && a <= 1.0))
          throw ConfigError("sweep.alpha_j: values must lie in [0,1] (0 = Poisson)");
        hwn::NetworkConfig net = config.network;
        if (a == 0.0)
          net.jammers->alpha.reset();
        else
          net.jammers->alpha = a;
        hwn::OutageEstimate est =
            hwn::estimate_outage(net, config.trials, outage_seed);
        append_outage_row(table, config, net.jammers->density, a, est,
                          outage_only, ruin_seed);
      }
      break;
    }
    case SweepAxis::SinrThreshold: {
      table.header = outage_only ? kTauHeader : kTauFullHeader;
      std::vector<hwn::OutageEstimate> ests = hwn::estimate_outage_multi_tau(
          config.network, sorted, config.trials, outage_seed);
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        const hwn::OutageEstimate& est = ests[i];
        std::vector<std::string> row;
        row.push_back(csv::num(sorted[i]));
        row.push_back(csv::num(est.probability));
        if (outage_only) {
          row.push_back(csv::num(est.ci_halfwidth));
          row.push_back(csv::num(est.trials));
          row.push_back(csv::num(config.seed));
        } else {
          double lambda = est.probability *
                          static_cast<double>(config.network.user_count);
          actuarial::RuinEstimate ruin = row_ruin(config, lambda, ruin_seed);
          row.push_back(csv::num(est.ci_halfwidth));
          row.push_back(csv::num(lambda));
          row.push_back(csv::num(ruin.probability));
          row.push_back(csv::num(ruin.ci_halfwidth));
          row.push_back(csv::num(est.trials));
          row.push_back(csv::num(ruin.paths));
          row.push_back(csv::num(config.seed));
        }
        table.rows.push_back(std::move(row));
      }
      break;
    }
    case SweepAxis::PremiumRate: {
      // Premium does not touch the outage stage, so outage runs once and the
      // outage_only flag has nothing to drop.
      if (sorted.front() < 0.0)
        throw ConfigError("sweep.premium_rate: rates must be >= 0");
      table.header = kPremiumHeader;
      hwn::OutageEstimate est =
          hwn::estimate_outage(config.network, config.trials, outage_seed);
      double lambda =
          est.probability * static_cast<double>(config.network.user_count);
      for (double c : sorted) {
        actuarial::InsuranceConfig ins = config.insurance(lambda);
        ins.premium_rate = c;
        actuarial::RuinEstimate ruin =
            actuarial::ruin_probability(ins, config.paths, ruin_seed);
        std::vector<std::string> row;
        row.push_back(csv::num(c));
        row.push_back(csv::num(lambda));
        row.push_back(csv::num(ruin.probability));
        row.push_back(csv::num(ruin.ci_halfwidth));
        row.push_back(csv::num(ruin.paths));
        row.push_back(csv::num(config.seed));
        table.rows.push_back(std::move(row));
      }
      break;
    }
  }
  return table;
}

SamplePathPair find_illustrative_paths(const actuarial::InsuranceConfig& config,
                                       std::uint64_t seed,
                                       std::uint64_t max_scan) {
  config.validate();
  if (max_scan < 1)
    throw InvalidParameter("find_illustrative_paths: max_scan must be >= 1");

  std::optional<actuarial::SurplusPath> ruined;
  std::optional<actuarial::SurplusPath> solvent;
  std::uint64_t ruined_index = 0;
  std::uint64_t solvent_index = 0;
  for (std::uint64_t i = 0; i < max_scan; ++i) {
    actuarial::SurplusPath path =
        actuarial::simulate_surplus_path(config, rng::derive_seed(seed, "path", i));
    if (path.claim_times.empty()) continue;
    if (path.ruined && !ruined) {
      ruined = std::move(path);
      ruined_index = i;
    } else if (!path.ruined && !solvent) {
      solvent = std::move(path);
      solvent_index = i;
    }
    if (ruined && solvent)
      return {std::move(*ruined), std::move(*solvent), ruined_index, solvent_index};
  }
  throw ResourceLimit(std::string("find_illustrative_paths: no ") +
                      (ruined ? "solvent" : "ruined") + " path with claims in " +
                      std::to_string(max_scan) + " seeds");
}

std::string path_csv(const actuarial::SurplusPath& path) {
  std::string out = "t,reserve\n";
  auto row = [&out](double t, double reserve) {
    out += csv::num(t);
    out += ',';
    out += csv::num(reserve);
    out += '\n';
  };
  row(0.0, path.initial_reserve);
  for (std::size_t k = 0; k < path.claim_times.size(); ++k) {
    row(path.claim_times[k], path.reserve_after_claim[k] + path.claim_amounts[k]);
    row(path.claim_times[k], path.reserve_after_claim[k]);
  }
  row(path.horizon, path.final_reserve());
  return out;
}

}  // namespace cyrisk::harness
