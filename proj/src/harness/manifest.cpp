#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "cyrisk/common/error.hpp"
#include "cyrisk/common/hash.hpp"
#include "cyrisk/harness.hpp"

namespace cyrisk::harness {

using nlohmann::json;

namespace {

constexpr const char* kManifestName = "manifest.json";
constexpr int kManifestSchemaVersion = 1;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceLimit("cannot open for writing: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw ResourceLimit("write failed: " + path.string());
}

bool read_file(const std::filesystem::path& path, std::string& content) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  content = buffer.str();
  return true;
}

}  // namespace

std::filesystem::path emit_manifest(const ScenarioConfig& config,
                                    std::span<const OutputFile> outputs,
                                    const std::filesystem::path& out_dir) {
  config.validate();
  for (const auto& f : outputs) {
    if (f.name.empty() || f.name.find('/') != std::string::npos ||
        f.name.find('\\') != std::string::npos || f.name == kManifestName)
      throw InvalidParameter("emit_manifest: output name must be a plain filename, got '" +
                             f.name + "'");
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw ResourceLimit("cannot create output directory " + out_dir.string() +
                        ": " + ec.message());

  json files = json::object();
  for (const auto& f : outputs) {
    write_file(out_dir / f.name, f.content);
    files[f.name] = hash::fnv_digest(f.content);
  }

  json manifest;
  manifest["schema_version"] = kManifestSchemaVersion;
  manifest["tool_version"] = kToolVersion;
  manifest["config_digest"] = config_digest(config);
  manifest["master_seed"] = config.seed;
  manifest["trials"] = config.trials;
  manifest["paths"] = config.paths;
  manifest["files"] = files;

  std::filesystem::path manifest_path = out_dir / kManifestName;
  write_file(manifest_path, manifest.dump(2) + "\n");
  return manifest_path;
}

ManifestCheck verify_manifest(const std::filesystem::path& out_dir) {
  ManifestCheck check;
  std::string text;
  std::filesystem::path manifest_path = out_dir / kManifestName;
  if (!read_file(manifest_path, text)) {
    check.problems.push_back("missing manifest: " + manifest_path.string());
    return check;
  }
  json manifest;
  try {
    manifest = json::parse(text);
  } catch (const json::parse_error& e) {
    check.problems.push_back(std::string("manifest parse error: ") + e.what());
    return check;
  }
  if (!manifest.is_object() || !manifest.contains("files") ||
      !manifest.at("files").is_object()) {
    check.problems.push_back("manifest has no file table");
    return check;
  }
  if (!manifest.contains("schema_version") ||
      manifest.at("schema_version") != kManifestSchemaVersion)
    check.problems.push_back("unsupported manifest schema version");

  for (auto it = manifest.at("files").begin(); it != manifest.at("files").end();
       ++it) {
    std::string content;
    std::filesystem::path path = out_dir / it.key();
    if (!read_file(path, content)) {
      check.problems.push_back("missing file: " + path.string());
      continue;
    }
    if (!it.value().is_string() ||
        it.value().get<std::string>() != hash::fnv_digest(content))
      check.problems.push_back("digest mismatch: " + path.string());
  }
  check.ok = check.problems.empty();
  return check;
}

}  // namespace cyrisk::harness
