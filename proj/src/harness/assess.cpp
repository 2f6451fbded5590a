#include <string>

#include "cyrisk/common/csv.hpp"
#include "cyrisk/common/rng.hpp"
#include "cyrisk/harness.hpp"

namespace cyrisk::harness {

AssessmentReport assess_with_outage(const ScenarioConfig& config,
                                    const hwn::OutageEstimate& outage) {
  AssessmentReport report;
  report.outage = outage;
  report.claim_intensity =
      outage.probability * static_cast<double>(config.network.user_count);
  report.ruin = actuarial::ruin_probability(config.insurance(report.claim_intensity),
                                            config.paths,
                                            rng::derive_seed(config.seed, "ruin"));
  if (config.calibration) {
    actuarial::CalibrationSettings settings;
    settings.resolution = config.calibration->resolution;
    settings.max_premium = config.calibration->max_premium;
    report.calibration = actuarial::calibrate_premium(
        config.insurance(report.claim_intensity), config.calibration->target_ruin,
        config.paths, rng::derive_seed(config.seed, "calibrate"), settings);
  }
  report.digest = config_digest(config);
  report.seed = config.seed;
  return report;
}

AssessmentReport assess(const ScenarioConfig& config) {
  config.validate();
  hwn::OutageEstimate outage = hwn::estimate_outage(
      config.network, config.trials, rng::derive_seed(config.seed, "outage"));
  return assess_with_outage(config, outage);
}

std::string assessment_csv(const AssessmentReport& report) {
  std::string out =
      "outage,outage_ci_halfwidth,lambda,ruin,ruin_ci_halfwidth,"
      "calibrated_premium,trials,paths,seed,config_digest,tool_version\n";
  out += csv::num(report.outage.probability);
  out += ',';
  out += csv::num(report.outage.ci_halfwidth);
  out += ',';
  out += csv::num(report.claim_intensity);
  out += ',';
  out += csv::num(report.ruin.probability);
  out += ',';
  out += csv::num(report.ruin.ci_halfwidth);
  out += ',';
  if (report.calibration) out += csv::num(report.calibration->premium);
  out += ',';
  out += csv::num(report.outage.trials);
  out += ',';
  out += csv::num(report.ruin.paths);
  out += ',';
  out += csv::num(report.seed);
  out += ',';
  out += report.digest;
  out += ',';
  out += report.tool_version;
  out += '\n';
  return out;
}

}  // namespace cyrisk::harness
