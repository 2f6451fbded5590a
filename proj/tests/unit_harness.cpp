#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cyrisk/common/csv.hpp"
#include "cyrisk/common/error.hpp"
#include "cyrisk/harness.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace cyrisk;
using namespace cyrisk::harness;

namespace {

ScenarioConfig small_scenario() {
  ScenarioConfig cfg = default_config();
  cfg.trials = 1500;
  cfg.paths = 2000;
  cfg.seed = 2026;
  return cfg;
}

void expect_config_error(const std::string& text, const std::string& needle) {
  try {
    (void)parse_config(text);
    FAIL("expected ConfigError mentioning ", needle);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const char* tag) {
    path = std::filesystem::temp_directory_path() /
           (std::string("cyrisk-test-") + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("default scenario matches the documented preset") {
  auto cfg = default_config();
  cfg.validate();
  REQUIRE(cfg.network.tiers.size() == 2);
  CHECK(cfg.network.tiers[0].power_dbm == 40.0);
  CHECK(cfg.network.tiers[0].density == 0.002);
  CHECK(cfg.network.tiers[0].pathloss_exponent == 3.5);
  CHECK(cfg.network.tiers[1].power_dbm == 33.0);
  CHECK(cfg.network.tiers[1].density == 0.01);
  CHECK(cfg.network.tiers[1].pathloss_exponent == 4.0);
  REQUIRE(cfg.network.jammers.has_value());
  CHECK(cfg.network.jammers->power_dbm == 30.0);
  CHECK(cfg.network.jammers->pathloss_exponent == 4.0);
  CHECK(cfg.network.sinr_threshold_db == -20.0);
  CHECK(cfg.network.user_count == 1000);
  CHECK_FALSE(cfg.network.noise_dbm.has_value());
  CHECK(cfg.premium_per_user == 0.1);
  CHECK(cfg.initial_reserve == 1.0);
  CHECK(cfg.horizon == 10.0);
  CHECK(cfg.claims.kind == actuarial::ClaimDistribution::Kind::Deterministic);
  CHECK(cfg.claims.value == 0.5);
  CHECK(cfg.seed == 1);

  // c = per-user rate x users unless an aggregate override is set.
  CHECK(cfg.aggregate_premium() == 100.0);
  cfg.aggregate_premium_override = 7.5;
  CHECK(cfg.aggregate_premium() == 7.5);

  auto ins = default_config().insurance(12.5);
  CHECK(ins.initial_reserve == 1.0);
  CHECK(ins.premium_rate == 100.0);
  CHECK(ins.claim_intensity == 12.5);
  CHECK(ins.horizon == 10.0);
  CHECK(ins.claims.value == 0.5);
}

TEST_CASE("config parsing accepts the documented shapes") {
  // Empty object = pure preset.
  auto preset = parse_config("{}");
  CHECK(config_digest(preset) == config_digest(default_config()));

  // alpha: null, "ppp" and 0 all mean Poisson; numbers mean repulsion.
  for (const char* form : {"null", "\"ppp\"", "0"}) {
    auto cfg = parse_config(std::string(R"({"network":{"tiers":[)") +
                            R"({"power_dbm":10,"density":0.01,"alpha":)" + form +
                            "}]}}");
    CHECK_FALSE(cfg.network.tiers[0].alpha.has_value());
  }
  auto rep = parse_config(
      R"({"network":{"tiers":[{"power_dbm":10,"density":0.01,"alpha":0.5}]}})");
  CHECK(rep.network.tiers[0].alpha == 0.5);

  // Missing jammer block stays at the preset; explicit null removes it.
  CHECK(parse_config("{}").network.jammers.has_value());
  CHECK_FALSE(parse_config(R"({"network":{"jammers":null}})").network.jammers.has_value());

  auto sweep_cfg = parse_config(
      R"({"sweep":{"zeta_j":[0.001,0.002],"tau_db":[-20,-10,0]}})");
  CHECK(sweep_cfg.sweep.jammer_density == std::vector<double>{0.001, 0.002});
  CHECK(sweep_cfg.sweep.tau_db == std::vector<double>{-20.0, -10.0, 0.0});
  CHECK(sweep_cfg.sweep.premium_rate.empty());

  auto cal_cfg = parse_config(R"({"calibrate":{"target_ruin":0.05}})");
  REQUIRE(cal_cfg.calibration.has_value());
  CHECK(cal_cfg.calibration->target_ruin == 0.05);
  CHECK(cal_cfg.calibration->resolution == 1e-3);

  auto exp_cfg = parse_config(
      R"({"insurance":{"claims":{"type":"exponential","mean":0.7}}})");
  CHECK(exp_cfg.claims.kind == actuarial::ClaimDistribution::Kind::Exponential);
  CHECK(exp_cfg.claims.value == 0.7);
}

TEST_CASE("config parsing names the offending field") {
  expect_config_error(R"({"bogus":1})", "config.bogus");
  expect_config_error(R"({"network":{"reuse_factor":1.3}})", "network.reuse_factor");
  expect_config_error(R"({"network":{"tiers":[{"power_dbm":1,"density":0.01,"watt":5}]}})",
                      "network.tiers[0].watt");
  expect_config_error(R"({"schema_version":2})", "schema_version");
  expect_config_error(R"({"trials":0})", "trials");
  expect_config_error(R"({"paths":0})", "paths");
  expect_config_error(R"({"insurance":{"premium_per_user":-1}})",
                      "insurance.premium_per_user");
  expect_config_error(R"({"insurance":{"horizon":0}})", "insurance.horizon");
  expect_config_error(R"({"insurance":{"claims":{"type":"gamma"}}})",
                      "insurance.claims.type");
  expect_config_error(R"({"insurance":{"claims":{"type":"deterministic","amount":-2}}})",
                      "insurance.claims");
  expect_config_error(R"({"sweep":{"zeta_j":[]}})", "sweep.zeta_j");
  expect_config_error(R"({"sweep":{"alpha_j":[1.5]}})", "sweep.alpha_j");
  expect_config_error(R"({"calibrate":{"target_ruin":1.5}})", "calibrate.target_ruin");
  expect_config_error("nonsense[", "parse error");
  expect_config_error("[1,2]", "top level");
}

TEST_CASE("config digests are canonical") {
  // Key order in the source text must not matter.
  auto a = parse_config(R"({"schema_version":1,"seed":9,"trials":500})");
  auto b = parse_config(R"({"trials":500,"schema_version":1,"seed":9})");
  CHECK(config_digest(a) == config_digest(b));
  CHECK(config_digest(a).rfind("fnv64:", 0) == 0);

  // Any value change moves the digest.
  auto c = parse_config(R"({"seed":10,"trials":500})");
  CHECK(config_digest(a) != config_digest(c));

  // Canonical text reparses to the same digest and spells out Poisson tiers.
  auto ppp = parse_config(R"({"network":{"tiers":[{"power_dbm":10,"density":0.01}]}})");
  std::string canon = canonical_json(ppp);
  CHECK(canon.find("\"alpha\":null") != std::string::npos);
  CHECK(config_digest(parse_config(canon)) == config_digest(ppp));
  auto full = default_config();
  full.sweep.tau_db = {-20.0, 0.0};
  full.calibration = CalibrationRequest{};
  CHECK(config_digest(parse_config(canonical_json(full))) == config_digest(full));
}

TEST_CASE("config files load through the same validation") {
  TempDir dir("cfg");
  std::filesystem::create_directories(dir.path);
  auto file = dir.path / "scenario.json";
  std::ofstream(file) << R"({"seed":77,"trials":123})";
  auto cfg = load_config(file);
  CHECK(cfg.seed == 77);
  CHECK(cfg.trials == 123);
  CHECK_THROWS_AS((void)load_config(dir.path / "absent.json"), ConfigError);
}

TEST_CASE("claim intensity is the outage probability times the user count") {
  auto cfg = small_scenario();
  hwn::OutageEstimate outage{0.01, 0.0, cfg.trials, 5};
  auto report = assess_with_outage(cfg, outage);
  CHECK(report.claim_intensity == 10.0);
  CHECK(report.outage.probability == 0.01);
  CHECK(report.seed == cfg.seed);
  CHECK(report.tool_version == std::string(kToolVersion));
  CHECK(report.digest == config_digest(cfg));
  CHECK_FALSE(report.calibration.has_value());

  // Zero outage silences the claims process entirely.
  auto quiet = assess_with_outage(cfg, hwn::OutageEstimate{0.0, 0.0, cfg.trials, 5});
  CHECK(quiet.claim_intensity == 0.0);
  CHECK(quiet.ruin.probability == 0.0);
}

TEST_CASE("assessment is deterministic and monotone in jammer density") {
  auto cfg = small_scenario();
  auto r1 = assess(cfg);
  auto r2 = assess(cfg);
  CHECK(r1.outage.probability == r2.outage.probability);
  CHECK(r1.ruin.probability == r2.ruin.probability);
  CHECK(r1.claim_intensity == r1.outage.probability * 1000.0);

  auto lo = cfg;
  lo.network.jammers->density = 0.0005;
  auto hi = cfg;
  hi.network.jammers->density = 0.008;
  auto rlo = assess(lo);
  auto rhi = assess(hi);
  CHECK(rlo.outage.probability <= rhi.outage.probability);
  CHECK(rlo.ruin.probability <= rhi.ruin.probability);
  CHECK(rlo.outage.probability < rhi.outage.probability);
}

TEST_CASE("assessment csv is schema stable") {
  auto cfg = small_scenario();
  auto report = assess_with_outage(cfg, hwn::OutageEstimate{0.02, 0.001, cfg.trials, 5});
  std::string text = assessment_csv(report);
  auto first_line = text.substr(0, text.find('\n'));
  CHECK(first_line ==
        "outage,outage_ci_halfwidth,lambda,ruin,ruin_ci_halfwidth,"
        "calibrated_premium,trials,paths,seed,config_digest,tool_version");
  // No calibration block: the premium cell is empty.
  CHECK(text.find(",,") != std::string::npos);
  CHECK(text.find("0.1.0\n") != std::string::npos);
  CHECK(text.find(report.digest) != std::string::npos);

  auto cal_cfg = cfg;
  cal_cfg.paths = 400;
  cal_cfg.calibration = CalibrationRequest{0.2, 1e-2, 1e4};
  auto cal_report = assess_with_outage(cal_cfg,
                                       hwn::OutageEstimate{0.05, 0.001, cfg.trials, 5});
  REQUIRE(cal_report.calibration.has_value());
  std::string cal_text = assessment_csv(cal_report);
  CHECK(cal_text.find(csv::num(cal_report.calibration->premium)) != std::string::npos);
  CHECK(cal_report.calibration->ruin.probability <= 0.2);
}

TEST_CASE("sweep axis names parse to the documented axes") {
  CHECK(parse_axis("zeta_j") == SweepAxis::JammerDensity);
  CHECK(parse_axis("alpha_j") == SweepAxis::JammerAlpha);
  CHECK(parse_axis("premium_rate") == SweepAxis::PremiumRate);
  CHECK(parse_axis("tau") == SweepAxis::SinrThreshold);
  CHECK_THROWS_AS((void)parse_axis("bogus"), ConfigError);
}

TEST_CASE("single-value sweeps reduce to the assess pipeline") {
  auto cfg = small_scenario();
  auto report = assess(cfg);

  std::vector<double> zeta = {cfg.network.jammers->density};
  auto t1 = sweep(cfg, SweepAxis::JammerDensity, zeta, false);
  REQUIRE(t1.rows.size() == 1);
  CHECK(t1.header == std::vector<std::string>{"zeta_j", "alpha_j", "outage",
                                              "outage_ci_halfwidth", "lambda", "ruin",
                                              "ruin_ci_halfwidth", "trials", "paths",
                                              "seed"});
  CHECK(t1.rows[0][2] == csv::num(report.outage.probability));
  CHECK(t1.rows[0][4] == csv::num(report.claim_intensity));
  CHECK(t1.rows[0][5] == csv::num(report.ruin.probability));

  std::vector<double> alpha = {*cfg.network.jammers->alpha};
  auto t2 = sweep(cfg, SweepAxis::JammerAlpha, alpha, false);
  CHECK(t2.rows[0][2] == csv::num(report.outage.probability));
  CHECK(t2.rows[0][5] == csv::num(report.ruin.probability));

  std::vector<double> tau = {cfg.network.sinr_threshold_db};
  auto t3 = sweep(cfg, SweepAxis::SinrThreshold, tau, false);
  CHECK(t3.header == std::vector<std::string>{"tau_db", "outage", "outage_ci_halfwidth",
                                              "lambda", "ruin", "ruin_ci_halfwidth",
                                              "trials", "paths", "seed"});
  CHECK(t3.rows[0][1] == csv::num(report.outage.probability));
  CHECK(t3.rows[0][4] == csv::num(report.ruin.probability));

  std::vector<double> prem = {cfg.aggregate_premium()};
  auto t4 = sweep(cfg, SweepAxis::PremiumRate, prem, false);
  CHECK(t4.header == std::vector<std::string>{"premium_rate", "lambda", "ruin",
                                              "ci_halfwidth", "paths", "seed"});
  CHECK(t4.rows[0][1] == csv::num(report.claim_intensity));
  CHECK(t4.rows[0][2] == csv::num(report.ruin.probability));
}

TEST_CASE("sweep tables are ordered and schema stable") {
  auto cfg = small_scenario();
  cfg.trials = 600;

  std::vector<double> zs = {0.008, 0.0005, 0.003};  // deliberately unsorted
  auto table = sweep(cfg, SweepAxis::JammerDensity, zs, true);
  CHECK(table.header == std::vector<std::string>{"zeta_j", "alpha_j", "outage",
                                                 "ci_halfwidth", "trials", "seed"});
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0][0] == csv::num(0.0005));
  CHECK(table.rows[1][0] == csv::num(0.003));
  CHECK(table.rows[2][0] == csv::num(0.008));
  // Monotone outage column under the coupled design.
  CHECK(std::stod(table.rows[0][2]) <= std::stod(table.rows[1][2]));
  CHECK(std::stod(table.rows[1][2]) <= std::stod(table.rows[2][2]));

  std::string text = table.csv();
  CHECK(text.rfind("zeta_j,alpha_j,outage,ci_halfwidth,trials,seed\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);

  // Poisson jammers are encoded as alpha 0 in the alpha column.
  std::vector<double> alphas = {0.0};
  auto ppp_row = sweep(cfg, SweepAxis::JammerAlpha, alphas, true);
  CHECK(ppp_row.rows[0][1] == "0");

  std::vector<double> taus = {0.0, -10.0};
  auto tau_table = sweep(cfg, SweepAxis::SinrThreshold, taus, true);
  CHECK(tau_table.header == std::vector<std::string>{"tau_db", "outage",
                                                     "ci_halfwidth", "trials", "seed"});
  CHECK(tau_table.rows[0][0] == csv::num(-10.0));
  CHECK(std::stod(tau_table.rows[0][1]) <= std::stod(tau_table.rows[1][1]));

  std::vector<double> none;
  CHECK_THROWS_AS((void)sweep(cfg, SweepAxis::JammerDensity, none, true), ConfigError);
  auto no_jam = cfg;
  no_jam.network.jammers.reset();
  CHECK_THROWS_AS((void)sweep(no_jam, SweepAxis::JammerDensity, zs, true), ConfigError);
}

TEST_CASE("premium sweep couples paths and never increases ruin") {
  auto cfg = small_scenario();
  cfg.paths = 3000;
  std::vector<double> rates = {20.0, 60.0, 100.0, 140.0};
  auto table = sweep(cfg, SweepAxis::PremiumRate, rates, false);
  REQUIRE(table.rows.size() == 4);
  double prev = 1.0;
  for (const auto& row : table.rows) {
    double ruin = std::stod(row[2]);
    CHECK(ruin <= prev);
    prev = ruin;
  }
  CHECK(std::stod(table.rows[0][2]) > std::stod(table.rows[3][2]));
}

TEST_CASE("illustrative path pair has one ruin and one recovery") {
  actuarial::InsuranceConfig ins;
  ins.initial_reserve = 1.0;
  ins.premium_rate = 1.0;
  ins.claim_intensity = 1.0;
  ins.horizon = 10.0;
  ins.claims = actuarial::ClaimDistribution::deterministic(0.5);

  auto pair = find_illustrative_paths(ins, 31, 100000);
  CHECK(pair.ruined.ruined);
  CHECK_FALSE(pair.solvent.ruined);
  CHECK(!pair.ruined.claim_times.empty());
  CHECK(!pair.solvent.claim_times.empty());

  auto again = find_illustrative_paths(ins, 31, 100000);
  CHECK(again.ruined_index == pair.ruined_index);
  CHECK(again.solvent_index == pair.solvent_index);

  // No claims ever -> the scan exhausts its budget.
  auto quiet = ins;
  quiet.claim_intensity = 0.0;
  CHECK_THROWS_AS((void)find_illustrative_paths(quiet, 1, 50), ResourceLimit);
}

TEST_CASE("path csv lists the pre and post claim reserve levels") {
  auto path = actuarial::build_surplus_path(1.0, 0.5, 4.0, {2.0}, {1.0});
  CHECK(path_csv(path) == "t,reserve\n0,1\n2,2\n2,1\n4,2\n");
  auto idle = actuarial::build_surplus_path(2.0, 0.25, 4.0, {}, {});
  CHECK(path_csv(idle) == "t,reserve\n0,2\n4,3\n");
}

TEST_CASE("manifests pin every emitted byte") {
  auto cfg = small_scenario();
  std::vector<OutputFile> files = {{"results.csv", "a,b\n1,2\n"},
                                   {"path.csv", "t,reserve\n0,1\n"}};
  TempDir dir("manifest");
  auto manifest_path = emit_manifest(cfg, files, dir.path);
  CHECK(manifest_path.filename() == "manifest.json");
  CHECK(std::filesystem::exists(dir.path / "results.csv"));

  auto check = verify_manifest(dir.path);
  CHECK(check.ok);
  CHECK(check.problems.empty());

  std::ifstream in(manifest_path);
  nlohmann::json manifest = nlohmann::json::parse(in);
  CHECK(manifest.at("schema_version").get<int>() == 1);
  CHECK(manifest.at("master_seed").get<std::uint64_t>() == cfg.seed);
  CHECK(manifest.at("config_digest").get<std::string>() == config_digest(cfg));
  CHECK(manifest.at("tool_version").get<std::string>() == kToolVersion);
  CHECK(manifest.at("files").size() == 2);

  // Re-emitting elsewhere yields byte-identical digests.
  TempDir dir2("manifest2");
  emit_manifest(cfg, files, dir2.path);
  std::ifstream in2(dir2.path / "manifest.json");
  nlohmann::json manifest2 = nlohmann::json::parse(in2);
  CHECK(manifest.at("files") == manifest2.at("files"));

  // A different seed moves the manifest but keeps the schema.
  auto reseeded = cfg;
  reseeded.seed = 9999;
  TempDir dir3("manifest3");
  emit_manifest(reseeded, files, dir3.path);
  std::ifstream in3(dir3.path / "manifest.json");
  nlohmann::json manifest3 = nlohmann::json::parse(in3);
  CHECK(manifest3.at("master_seed").get<std::uint64_t>() == 9999);
  CHECK(manifest3.at("files") == manifest.at("files"));
  CHECK(manifest3.at("config_digest") != manifest.at("config_digest"));

  // Tampering with an output is caught.
  std::ofstream(dir.path / "results.csv", std::ios::app) << "tampered\n";
  auto bad = verify_manifest(dir.path);
  CHECK_FALSE(bad.ok);
  REQUIRE(!bad.problems.empty());
  CHECK(bad.problems[0].find("results.csv") != std::string::npos);

  // Missing files are caught too.
  std::filesystem::remove(dir.path / "path.csv");
  auto worse = verify_manifest(dir.path);
  CHECK_FALSE(worse.ok);
  CHECK(worse.problems.size() == 2);

  std::vector<OutputFile> clash = {{"manifest.json", "{}"}};
  CHECK_THROWS_AS((void)emit_manifest(cfg, clash, dir.path), InvalidParameter);
  std::vector<OutputFile> nested = {{"sub/x.csv", "x"}};
  CHECK_THROWS_AS((void)emit_manifest(cfg, nested, dir.path), InvalidParameter);

  auto empty_check = verify_manifest(dir.path / "nowhere");
  CHECK_FALSE(empty_check.ok);
}
