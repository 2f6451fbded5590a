#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "cyrisk/common/csv.hpp"
#include "cyrisk/common/error.hpp"
#include "cyrisk/common/hash.hpp"
#include "cyrisk/harness.hpp"

namespace cyrisk::harness {

using nlohmann::json;

double ScenarioConfig::aggregate_premium() const {
  if (aggregate_premium_override) return *aggregate_premium_override;
  return premium_per_user * static_cast<double>(network.user_count);
}

actuarial::InsuranceConfig ScenarioConfig::insurance(double claim_intensity) const {
  actuarial::InsuranceConfig out;
  out.initial_reserve = initial_reserve;
  out.premium_rate = aggregate_premium();
  out.claim_intensity = claim_intensity;
  out.horizon = horizon;
  out.claims = claims;
  return out;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& what) {
    throw ConfigError(field + ": " + what);
  };
  if (schema_version != kConfigSchemaVersion)
    fail("schema_version", "unsupported version " + std::to_string(schema_version));
  try {
    network.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("network.") + e.what());
  }
  if (!(premium_per_user >= 0.0) || !std::isfinite(premium_per_user))
    fail("insurance.premium_per_user", "must be finite and >= 0");
  if (aggregate_premium_override &&
      (!(*aggregate_premium_override >= 0.0) || !std::isfinite(*aggregate_premium_override)))
    fail("insurance.aggregate_premium_rate", "must be finite and >= 0");
  if (!(initial_reserve >= 0.0) || !std::isfinite(initial_reserve))
    fail("insurance.initial_reserve", "must be finite and >= 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    fail("insurance.horizon", "must be finite and > 0");
  if (!(claims.value > 0.0) || !std::isfinite(claims.value))
    fail("insurance.claims", "amount/mean must be finite and > 0");
  if (trials < 1) fail("trials", "must be >= 1");
  if (paths < 1) fail("paths", "must be >= 1");

  auto check_axis = [&](const std::vector<double>& values, const std::string& name,
                        bool allow_zero) {
    for (double v : values) {
      if (!std::isfinite(v)) fail("sweep." + name, "values must be finite");
      if (!allow_zero && !(v >= 0.0)) fail("sweep." + name, "values must be >= 0");
    }
  };
  check_axis(sweep.jammer_density, "zeta_j", false);
  check_axis(sweep.premium_rate, "premium_rate", false);
  check_axis(sweep.tau_db, "tau_db", true);
  for (double a : sweep.jammer_alpha)
    if (!(a >= 0.0 && a <= 1.0))
      fail("sweep.alpha_j", "values must lie in [0,1] (0 = Poisson)");
  if (calibration) {
    if (!(calibration->target_ruin > 0.0 && calibration->target_ruin < 1.0))
      fail("calibrate.target_ruin", "must lie in (0,1)");
    if (!(calibration->resolution > 0.0) || !std::isfinite(calibration->resolution))
      fail("calibrate.resolution", "must be finite and > 0");
    if (!(calibration->max_premium > 0.0))
      fail("calibrate.max_premium", "must be > 0");
  }
}

ScenarioConfig default_config() {
  ScenarioConfig cfg;
  cfg.network.tiers = {
      {40.0, 0.002, 0.5, 3.5},
      {33.0, 0.01, 0.5, 4.0},
  };
  cfg.network.jammers = hwn::JammerConfig{30.0, 0.005, 0.5, 4.0};
  cfg.network.reuse_factor = 1.0;
  cfg.network.noise_dbm.reset();
  cfg.network.sinr_threshold_db = -20.0;
  cfg.network.window = {30.0};
  cfg.network.user_count = 1000;
  cfg.premium_per_user = 0.1;
  cfg.initial_reserve = 1.0;
  cfg.horizon = 10.0;
  cfg.claims = actuarial::ClaimDistribution::deterministic(0.5);
  cfg.trials = 10000;
  cfg.paths = 10000;
  cfg.seed = 1;
  return cfg;
}

namespace {

[[noreturn]] void bad_field(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void expect_keys(const json& obj, const std::string& path,
                 const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) bad_field(path + "." + it.key(), "unknown field");
}

double get_number(const json& obj, const std::string& path, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) bad_field(path + "." + key, "must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& obj, const std::string& path, const char* key,
                        std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) bad_field(path + "." + key, "must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

// alpha accepts a number in (0,1], or 0 / null / "ppp" for the Poisson case.
std::optional<double> get_alpha(const json& obj, const std::string& path,
                                std::optional<double> fallback) {
  if (!obj.contains("alpha")) return fallback;
  const json& v = obj.at("alpha");
  if (v.is_null()) return std::nullopt;
  if (v.is_string()) {
    if (v.get<std::string>() == "ppp") return std::nullopt;
    bad_field(path + ".alpha", "unknown marker '" + v.get<std::string>() + "'");
  }
  if (!v.is_number()) bad_field(path + ".alpha", "must be a number, null, or \"ppp\"");
  double a = v.get<double>();
  if (a == 0.0) return std::nullopt;
  return a;
}

std::vector<double> get_list(const json& obj, const std::string& path,
                             const char* key) {
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  const json& v = obj.at(key);
  if (!v.is_array() || v.empty())
    bad_field(path + "." + key, "must be a non-empty array of numbers");
  for (const auto& e : v) {
    if (!e.is_number()) bad_field(path + "." + key, "must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

hwn::TierConfig parse_tier(const json& obj, const std::string& path,
                           const hwn::TierConfig& fallback) {
  if (!obj.is_object()) bad_field(path, "must be an object");
  expect_keys(obj, path, {"power_dbm", "density", "alpha", "pathloss_exponent"});
  hwn::TierConfig t;
  t.power_dbm = get_number(obj, path, "power_dbm", fallback.power_dbm);
  t.density = get_number(obj, path, "density", fallback.density);
  t.alpha = get_alpha(obj, path, fallback.alpha);
  t.pathloss_exponent =
      get_number(obj, path, "pathloss_exponent", fallback.pathloss_exponent);
  return t;
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  ScenarioConfig cfg = default_config();
  expect_keys(root, "config",
              {"schema_version", "seed", "trials", "paths", "network", "insurance",
               "sweep", "calibrate"});

  if (root.contains("schema_version")) {
    if (!root.at("schema_version").is_number_integer())
      bad_field("config.schema_version", "must be an integer");
    cfg.schema_version = root.at("schema_version").get<int>();
  }
  cfg.seed = get_count(root, "config", "seed", cfg.seed);
  cfg.trials = get_count(root, "config", "trials", cfg.trials);
  cfg.paths = get_count(root, "config", "paths", cfg.paths);

  if (root.contains("network")) {
    const json& net = root.at("network");
    if (!net.is_object()) bad_field("config.network", "must be an object");
    expect_keys(net, "network",
                {"tiers", "jammers", "reuse_factor", "noise_dbm",
                 "sinr_threshold_db", "window_radius", "user_count"});
    if (net.contains("tiers")) {
      const json& tiers = net.at("tiers");
      if (!tiers.is_array() || tiers.empty())
        bad_field("network.tiers", "must be a non-empty array");
      cfg.network.tiers.clear();
      for (std::size_t k = 0; k < tiers.size(); ++k)
        cfg.network.tiers.push_back(parse_tier(
            tiers[k], "network.tiers[" + std::to_string(k) + "]", hwn::TierConfig{}));
    }
    if (net.contains("jammers")) {
      const json& jam = net.at("jammers");
      if (jam.is_null()) {
        cfg.network.jammers.reset();
      } else {
        hwn::TierConfig parsed = parse_tier(jam, "network.jammers", hwn::TierConfig{});
        cfg.network.jammers = hwn::JammerConfig{parsed.power_dbm, parsed.density,
                                                parsed.alpha, parsed.pathloss_exponent};
      }
    }
    cfg.network.reuse_factor =
        get_number(net, "network", "reuse_factor", cfg.network.reuse_factor);
    if (net.contains("noise_dbm")) {
      const json& noise = net.at("noise_dbm");
      if (noise.is_null())
        cfg.network.noise_dbm.reset();
      else if (noise.is_number())
        cfg.network.noise_dbm = noise.get<double>();
      else
        bad_field("network.noise_dbm", "must be a number or null");
    }
    cfg.network.sinr_threshold_db =
        get_number(net, "network", "sinr_threshold_db", cfg.network.sinr_threshold_db);
    cfg.network.window.radius =
        get_number(net, "network", "window_radius", cfg.network.window.radius);
    cfg.network.user_count =
        get_count(net, "network", "user_count", cfg.network.user_count);
  }

  if (root.contains("insurance")) {
    const json& ins = root.at("insurance");
    if (!ins.is_object()) bad_field("config.insurance", "must be an object");
    expect_keys(ins, "insurance",
                {"initial_reserve", "premium_per_user", "aggregate_premium_rate",
                 "horizon", "claims"});
    cfg.initial_reserve =
        get_number(ins, "insurance", "initial_reserve", cfg.initial_reserve);
    cfg.premium_per_user =
        get_number(ins, "insurance", "premium_per_user", cfg.premium_per_user);
    if (ins.contains("aggregate_premium_rate")) {
      const json& agg = ins.at("aggregate_premium_rate");
      if (agg.is_null())
        cfg.aggregate_premium_override.reset();
      else if (agg.is_number())
        cfg.aggregate_premium_override = agg.get<double>();
      else
        bad_field("insurance.aggregate_premium_rate", "must be a number or null");
    }
    cfg.horizon = get_number(ins, "insurance", "horizon", cfg.horizon);
    if (ins.contains("claims")) {
      const json& claims = ins.at("claims");
      if (!claims.is_object()) bad_field("insurance.claims", "must be an object");
      expect_keys(claims, "insurance.claims", {"type", "amount", "mean"});
      if (!claims.contains("type") || !claims.at("type").is_string())
        bad_field("insurance.claims.type", "must be \"deterministic\" or \"exponential\"");
      std::string type = claims.at("type").get<std::string>();
      try {
        if (type == "deterministic") {
          if (!claims.contains("amount"))
            bad_field("insurance.claims.amount", "required for deterministic claims");
          cfg.claims = actuarial::ClaimDistribution::deterministic(
              get_number(claims, "insurance.claims", "amount", 0.0));
        } else if (type == "exponential") {
          if (!claims.contains("mean"))
            bad_field("insurance.claims.mean", "required for exponential claims");
          cfg.claims = actuarial::ClaimDistribution::exponential(
              get_number(claims, "insurance.claims", "mean", 0.0));
        } else {
          bad_field("insurance.claims.type", "unknown type '" + type + "'");
        }
      } catch (const InvalidParameter& e) {
        throw ConfigError(std::string("insurance.") + e.what());
      }
    }
  }

  if (root.contains("sweep") && !root.at("sweep").is_null()) {
    const json& sw = root.at("sweep");
    if (!sw.is_object()) bad_field("config.sweep", "must be an object or null");
    expect_keys(sw, "sweep", {"zeta_j", "alpha_j", "premium_rate", "tau_db"});
    cfg.sweep.jammer_density = get_list(sw, "sweep", "zeta_j");
    cfg.sweep.jammer_alpha = get_list(sw, "sweep", "alpha_j");
    cfg.sweep.premium_rate = get_list(sw, "sweep", "premium_rate");
    cfg.sweep.tau_db = get_list(sw, "sweep", "tau_db");
  }

  if (root.contains("calibrate") && !root.at("calibrate").is_null()) {
    const json& cal = root.at("calibrate");
    if (!cal.is_object()) bad_field("config.calibrate", "must be an object or null");
    expect_keys(cal, "calibrate", {"target_ruin", "resolution", "max_premium"});
    CalibrationRequest req;
    req.target_ruin = get_number(cal, "calibrate", "target_ruin", req.target_ruin);
    req.resolution = get_number(cal, "calibrate", "resolution", req.resolution);
    req.max_premium = get_number(cal, "calibrate", "max_premium", req.max_premium);
    cfg.calibration = req;
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not readable: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string canonical_json(const ScenarioConfig& cfg) {
  json root;
  root["schema_version"] = cfg.schema_version;
  root["seed"] = cfg.seed;
  root["trials"] = cfg.trials;
  root["paths"] = cfg.paths;

  json net;
  json tiers = json::array();
  for (const auto& t : cfg.network.tiers) {
    json tier;
    tier["power_dbm"] = t.power_dbm;
    tier["density"] = t.density;
    tier["alpha"] = t.alpha ? json(*t.alpha) : json(nullptr);
    tier["pathloss_exponent"] = t.pathloss_exponent;
    tiers.push_back(tier);
  }
  net["tiers"] = tiers;
  if (cfg.network.jammers) {
    json jam;
    jam["power_dbm"] = cfg.network.jammers->power_dbm;
    jam["density"] = cfg.network.jammers->density;
    jam["alpha"] =
        cfg.network.jammers->alpha ? json(*cfg.network.jammers->alpha) : json(nullptr);
    jam["pathloss_exponent"] = cfg.network.jammers->pathloss_exponent;
    net["jammers"] = jam;
  } else {
    net["jammers"] = nullptr;
  }
  net["reuse_factor"] = cfg.network.reuse_factor;
  net["noise_dbm"] = cfg.network.noise_dbm ? json(*cfg.network.noise_dbm) : json(nullptr);
  net["sinr_threshold_db"] = cfg.network.sinr_threshold_db;
  net["window_radius"] = cfg.network.window.radius;
  net["user_count"] = cfg.network.user_count;
  root["network"] = net;

  json ins;
  ins["initial_reserve"] = cfg.initial_reserve;
  ins["premium_per_user"] = cfg.premium_per_user;
  ins["aggregate_premium_rate"] =
      cfg.aggregate_premium_override ? json(*cfg.aggregate_premium_override) : json(nullptr);
  ins["horizon"] = cfg.horizon;
  json claims;
  claims["type"] = cfg.claims.kind == actuarial::ClaimDistribution::Kind::Deterministic
                       ? "deterministic"
                       : "exponential";
  if (cfg.claims.kind == actuarial::ClaimDistribution::Kind::Deterministic)
    claims["amount"] = cfg.claims.value;
  else
    claims["mean"] = cfg.claims.value;
  ins["claims"] = claims;
  root["insurance"] = ins;

  json sw;
  if (!cfg.sweep.jammer_density.empty()) sw["zeta_j"] = cfg.sweep.jammer_density;
  if (!cfg.sweep.jammer_alpha.empty()) sw["alpha_j"] = cfg.sweep.jammer_alpha;
  if (!cfg.sweep.premium_rate.empty()) sw["premium_rate"] = cfg.sweep.premium_rate;
  if (!cfg.sweep.tau_db.empty()) sw["tau_db"] = cfg.sweep.tau_db;
  root["sweep"] = sw;

  if (cfg.calibration) {
    json cal;
    cal["target_ruin"] = cfg.calibration->target_ruin;
    cal["resolution"] = cfg.calibration->resolution;
    cal["max_premium"] = cfg.calibration->max_premium;
    root["calibrate"] = cal;
  } else {
    root["calibrate"] = nullptr;
  }

  return root.dump();  // nlohmann objects iterate in sorted key order
}

std::string config_digest(const ScenarioConfig& cfg) {
  return hash::fnv_digest(canonical_json(cfg));
}

}  // namespace cyrisk::harness
