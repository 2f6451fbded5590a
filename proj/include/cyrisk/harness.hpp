#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cyrisk/actuarial.hpp"
#include "cyrisk/hwn.hpp"

namespace cyrisk::harness {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

// Optional value lists for parameter sweeps. jammer_alpha uses 0 to encode
// the Poisson (no-repulsion) limit.
struct SweepAxes {
  std::vector<double> jammer_density;
  std::vector<double> jammer_alpha;
  std::vector<double> premium_rate;  // aggregate rates
  std::vector<double> tau_db;
};

struct CalibrationRequest {
  double target_ruin = 0.1;
  double resolution = 1e-3;
  double max_premium = 1e6;
};

// Full scenario: network model, insurance contract, run sizes, seed, and
// optional sweep/calibration blocks. Defaults reproduce the documented
// two-tier preset.
struct ScenarioConfig {
  int schema_version = kConfigSchemaVersion;
  hwn::NetworkConfig network;
  double premium_per_user = 0.1;
  std::optional<double> aggregate_premium_override;
  double initial_reserve = 1.0;
  double horizon = 10.0;
  actuarial::ClaimDistribution claims =
      actuarial::ClaimDistribution::deterministic(0.5);
  std::uint64_t trials = 10000;
  std::uint64_t paths = 10000;
  std::uint64_t seed = 1;
  SweepAxes sweep;
  std::optional<CalibrationRequest> calibration;

  // c = per-user rate x user count, unless overridden with an aggregate rate.
  double aggregate_premium() const;
  actuarial::InsuranceConfig insurance(double claim_intensity) const;
  void validate() const;  // ConfigError naming the offending field
};

// Two-tier default scenario (40/33 dBm at 3.5/4, 30 dBm jammers at 4,
// tau = -20 dB, 1000 users, y = 1, T = 10, per-user premium 0.1).
ScenarioConfig default_config();

ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::filesystem::path& path);

// Canonical serialization (sorted keys, full precision); the digest is
// stable under key reordering in the source file.
std::string canonical_json(const ScenarioConfig& config);
std::string config_digest(const ScenarioConfig& config);

struct AssessmentReport {
  hwn::OutageEstimate outage;
  double claim_intensity = 0.0;  // outage probability x user count, exact
  actuarial::RuinEstimate ruin;
  std::optional<actuarial::CalibrationResult> calibration;
  std::string digest;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
};

// Outage stage -> claim intensity -> ruin stage (-> calibration when the
// config requests it). Deterministic in (config, seed).
AssessmentReport assess(const ScenarioConfig& config);

// Same pipeline with the outage stage replaced by a precomputed estimate.
AssessmentReport assess_with_outage(const ScenarioConfig& config,
                                    const hwn::OutageEstimate& outage);

std::string assessment_csv(const AssessmentReport& report);

enum class SweepAxis { JammerDensity, JammerAlpha, PremiumRate, SinrThreshold };

// Accepts zeta_j | alpha_j | premium_rate | tau; ConfigError otherwise.
SweepAxis parse_axis(std::string_view name);

struct SweepTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const;
};

// One row per axis value, ordered by value. Values on one axis share random
// numbers wherever a monotonicity property is meant to hold with zero
// violations (jammer density, threshold, premium). A single-value sweep
// reduces to assess on the modified config. outage_only drops the actuarial
// stage for the network axes.
SweepTable sweep(const ScenarioConfig& config, SweepAxis axis,
                 std::span<const double> values, bool outage_only);

struct SamplePathPair {
  actuarial::SurplusPath ruined;
  actuarial::SurplusPath solvent;
  std::uint64_t ruined_index = 0;   // path-seed indices within the scan
  std::uint64_t solvent_index = 0;
};

// Scans path seeds (same derivation as ruin_probability) until it finds one
// ruined and one solvent path, each with at least one claim. Throws
// ResourceLimit when max_scan seeds are exhausted.
SamplePathPair find_illustrative_paths(const actuarial::InsuranceConfig& config,
                                       std::uint64_t seed,
                                       std::uint64_t max_scan);

// Event-list CSV "t,reserve": start point, pre/post rows per claim, final
// value at the horizon.
std::string path_csv(const actuarial::SurplusPath& path);

struct OutputFile {
  std::string name;     // plain filename inside the output directory
  std::string content;
};

// Writes every output plus manifest.json (config digest, seed, counts, tool
// version, per-file digests). Returns the manifest path.
std::filesystem::path emit_manifest(const ScenarioConfig& config,
                                    std::span<const OutputFile> outputs,
                                    const std::filesystem::path& out_dir);

struct ManifestCheck {
  bool ok = false;
  std::vector<std::string> problems;
};

// Re-hashes the files listed in dir/manifest.json.
ManifestCheck verify_manifest(const std::filesystem::path& out_dir);

}  // namespace cyrisk::harness
