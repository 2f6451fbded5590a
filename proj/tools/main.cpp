#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cyrisk/common/csv.hpp"
#include "cyrisk/common/error.hpp"
#include "cyrisk/common/rng.hpp"
#include "cyrisk/geometry.hpp"
#include "cyrisk/harness.hpp"

namespace {

using namespace cyrisk;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> paths;
  std::string out_dir;

  harness::ScenarioConfig make_config() const {
    harness::ScenarioConfig cfg = config_path.empty()
                                      ? harness::default_config()
                                      : harness::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = *trials;
    if (paths) cfg.paths = *paths;
    cfg.validate();
    return cfg;
  }

  // With --out, files land in the directory next to a manifest; otherwise the
  // CSV content goes to stdout.
  void deliver(const harness::ScenarioConfig& cfg,
               std::span<const harness::OutputFile> files) const {
    if (!out_dir.empty()) {
      auto manifest = harness::emit_manifest(cfg, files, out_dir);
      std::cout << manifest.string() << '\n';
      return;
    }
    for (const auto& f : files) std::cout << f.content;
  }
};

std::string pattern_name(std::uint64_t index) {
  std::ostringstream name;
  name << "pattern_" << index << ".csv";
  return name.str();
}

int run_sample_geometry(const GlobalOptions& global, std::uint64_t patterns,
                        std::size_t tier, bool jammers) {
  harness::ScenarioConfig cfg = global.make_config();
  geometry::ProcessSpec spec = [&] {
    if (jammers) {
      if (!cfg.network.jammers)
        throw ConfigError("sample-geometry: config has no jammer block");
      return cfg.network.jammers->process_spec();
    }
    if (tier >= cfg.network.tiers.size())
      throw ConfigError("sample-geometry: tier index out of range");
    return cfg.network.tiers[tier].process_spec();
  }();
  if (patterns < 1) throw ConfigError("sample-geometry: need at least one pattern");

  std::vector<harness::OutputFile> files;
  for (std::uint64_t i = 0; i < patterns; ++i) {
    geometry::PointPattern pattern = geometry::sample(
        spec, cfg.network.window, rng::derive_seed(cfg.seed, "pattern", i));
    std::ostringstream body;
    geometry::write_pattern_csv(pattern, body);
    files.push_back({pattern_name(i), body.str()});
  }
  global.deliver(cfg, files);
  return 0;
}

int run_outage(const GlobalOptions& global) {
  harness::ScenarioConfig cfg = global.make_config();
  hwn::OutageEstimate est = hwn::estimate_outage(
      cfg.network, cfg.trials, rng::derive_seed(cfg.seed, "outage"));
  std::string body = "outage,ci_halfwidth,trials,seed\n";
  body += csv::num(est.probability) + "," + csv::num(est.ci_halfwidth) + "," +
          csv::num(est.trials) + "," + csv::num(cfg.seed) + "\n";
  std::vector<harness::OutputFile> files{{"outage.csv", body}};
  global.deliver(cfg, files);
  return 0;
}

int run_ruin(const GlobalOptions& global, std::optional<double> lambda_override) {
  harness::ScenarioConfig cfg = global.make_config();
  double lambda;
  if (lambda_override) {
    if (!(*lambda_override >= 0.0))
      throw ConfigError("ruin: --lambda must be >= 0");
    lambda = *lambda_override;
  } else {
    hwn::OutageEstimate est = hwn::estimate_outage(
        cfg.network, cfg.trials, rng::derive_seed(cfg.seed, "outage"));
    lambda = est.probability * static_cast<double>(cfg.network.user_count);
  }
  actuarial::RuinEstimate ruin = actuarial::ruin_probability(
      cfg.insurance(lambda), cfg.paths, rng::derive_seed(cfg.seed, "ruin"));
  std::string body = "lambda,ruin,ci_halfwidth,paths,seed\n";
  body += csv::num(lambda) + "," + csv::num(ruin.probability) + "," +
          csv::num(ruin.ci_halfwidth) + "," + csv::num(ruin.paths) + "," +
          csv::num(cfg.seed) + "\n";
  std::vector<harness::OutputFile> files{{"ruin.csv", body}};
  global.deliver(cfg, files);
  return 0;
}

int run_assess(const GlobalOptions& global, bool sample_paths,
               std::uint64_t max_scan) {
  harness::ScenarioConfig cfg = global.make_config();
  harness::AssessmentReport report = harness::assess(cfg);
  std::vector<harness::OutputFile> files{
      {"assessment.csv", harness::assessment_csv(report)}};
  if (sample_paths) {
    harness::SamplePathPair pair = harness::find_illustrative_paths(
        cfg.insurance(report.claim_intensity), rng::derive_seed(cfg.seed, "ruin"),
        max_scan);
    files.push_back({"path_ruined.csv", harness::path_csv(pair.ruined)});
    files.push_back({"path_solvent.csv", harness::path_csv(pair.solvent)});
  }
  global.deliver(cfg, files);
  return 0;
}

int run_sweep(const GlobalOptions& global, const std::string& axis_name,
              const std::vector<double>& cli_values, bool outage_only) {
  harness::ScenarioConfig cfg = global.make_config();
  harness::SweepAxis axis = harness::parse_axis(axis_name);
  std::vector<double> values = cli_values;
  if (values.empty()) {
    switch (axis) {
      case harness::SweepAxis::JammerDensity: values = cfg.sweep.jammer_density; break;
      case harness::SweepAxis::JammerAlpha: values = cfg.sweep.jammer_alpha; break;
      case harness::SweepAxis::PremiumRate: values = cfg.sweep.premium_rate; break;
      case harness::SweepAxis::SinrThreshold: values = cfg.sweep.tau_db; break;
    }
  }
  if (values.empty())
    throw ConfigError("sweep: no values given for axis " + axis_name +
                      " (pass --values or fill the config's sweep block)");
  harness::SweepTable table = harness::sweep(cfg, axis, values, outage_only);
  std::vector<harness::OutputFile> files{{"sweep.csv", table.csv()}};
  global.deliver(cfg, files);
  return 0;
}

int run_calibrate(const GlobalOptions& global, std::optional<double> target,
                  std::optional<double> resolution,
                  std::optional<double> max_premium) {
  harness::ScenarioConfig cfg = global.make_config();
  harness::CalibrationRequest request =
      cfg.calibration ? *cfg.calibration : harness::CalibrationRequest{};
  if (target) request.target_ruin = *target;
  if (resolution) request.resolution = *resolution;
  if (max_premium) request.max_premium = *max_premium;
  cfg.calibration = request;
  cfg.validate();

  hwn::OutageEstimate est = hwn::estimate_outage(
      cfg.network, cfg.trials, rng::derive_seed(cfg.seed, "outage"));
  double lambda = est.probability * static_cast<double>(cfg.network.user_count);
  actuarial::CalibrationSettings settings{request.resolution, request.max_premium};
  actuarial::CalibrationResult result = actuarial::calibrate_premium(
      cfg.insurance(lambda), request.target_ruin, cfg.paths,
      rng::derive_seed(cfg.seed, "calibrate"), settings);

  std::string body =
      "calibrated_premium,ruin,ci_halfwidth,bracket_low,iterations,lambda,paths,seed\n";
  body += csv::num(result.premium) + "," + csv::num(result.ruin.probability) + "," +
          csv::num(result.ruin.ci_halfwidth) + "," + csv::num(result.bracket_low) +
          "," + csv::num(result.iterations) + "," + csv::num(lambda) + "," +
          csv::num(result.ruin.paths) + "," + csv::num(cfg.seed) + "\n";
  std::vector<harness::OutputFile> files{{"calibrate.csv", body}};
  global.deliver(cfg, files);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wireless-network outage and cyber-insurance risk simulator"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--config", global.config_path, "Scenario config file (JSON)");
  app.add_option("--seed", global.seed, "Master seed override");
  app.add_option("--trials", global.trials, "Outage trial count override");
  app.add_option("--paths", global.paths, "Surplus path count override");
  app.add_option("--out", global.out_dir, "Output directory (writes a manifest)");

  auto* geom = app.add_subcommand("sample-geometry", "Draw point patterns as x,y CSV");
  std::uint64_t patterns = 1;
  std::size_t tier = 0;
  bool jammers = false;
  geom->add_option("--patterns", patterns, "Number of realizations");
  geom->add_option("--tier", tier, "Tier index to sample");
  geom->add_flag("--jammers", jammers, "Sample the jammer process instead");

  auto* outage = app.add_subcommand("outage", "Estimate SINR outage probability");

  auto* ruin = app.add_subcommand("ruin", "Estimate finite-horizon ruin probability");
  std::optional<double> lambda_override;
  ruin->add_option("--lambda", lambda_override,
                   "Claim intensity (skips the outage stage)");

  auto* assess = app.add_subcommand("assess", "Outage, claim intensity, and ruin");
  bool sample_paths = false;
  std::uint64_t max_scan = 100000;
  assess->add_flag("--sample-paths", sample_paths,
                   "Also emit one ruined and one solvent reserve path");
  assess->add_option("--max-scan", max_scan, "Path-seed scan limit");

  auto* sweep = app.add_subcommand("sweep", "One row per value along an axis");
  std::string axis_name;
  std::vector<double> cli_values;
  bool outage_only = false;
  sweep->add_option("--axis", axis_name, "zeta_j | alpha_j | premium_rate | tau")
      ->required();
  sweep->add_option("--values", cli_values, "Axis values (default: config sweep block)");
  sweep->add_flag("--outage-only", outage_only, "Skip the actuarial stage");

  auto* calibrate = app.add_subcommand("calibrate",
                                       "Smallest premium meeting a ruin target");
  std::optional<double> target;
  std::optional<double> resolution;
  std::optional<double> max_premium;
  calibrate->add_option("--target-ruin", target, "Acceptable ruin probability");
  calibrate->add_option("--resolution", resolution, "Premium search resolution");
  calibrate->add_option("--max-premium", max_premium, "Bracket growth cap");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (geom->parsed()) return run_sample_geometry(global, patterns, tier, jammers);
    if (outage->parsed()) return run_outage(global);
    if (ruin->parsed()) return run_ruin(global, lambda_override);
    if (assess->parsed()) return run_assess(global, sample_paths, max_scan);
    if (sweep->parsed()) return run_sweep(global, axis_name, cli_values, outage_only);
    if (calibrate->parsed())
      return run_calibrate(global, target, resolution, max_premium);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidParameter& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
