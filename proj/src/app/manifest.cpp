#include "rainweave/app/manifest.hpp"

#include "rainweave/app/config.hpp"
#include "rainweave/error.hpp"

#ifndef RAINWEAVE_VERSION
#define RAINWEAVE_VERSION "0.0.0"
#endif

namespace rainweave::app {

using nlohmann::json;

const char* tool_version() { return RAINWEAVE_VERSION; }

namespace {

json digests_to_json(const std::vector<FileDigest>& files) {
  json arr = json::array();
  for (const auto& f : files) arr.push_back({{"role", f.role}, {"path", f.path}, {"sha256", f.sha256}});
  return arr;
}

std::vector<FileDigest> digests_from_json(const json& arr) {
  std::vector<FileDigest> files;
  for (const auto& f : arr) {
    files.push_back({f.at("role").get<std::string>(), f.at("path").get<std::string>(),
                     f.at("sha256").get<std::string>()});
  }
  return files;
}

}  // namespace

json RunManifest::to_json() const {
  json timing = json::object();
  for (const auto& [stage, ms] : timing_ms) timing[stage] = ms;
  return json{{"tool_version", tool_version},
              {"command", command},
              {"seed", seed},
              {"config", config_to_json(config)},
              {"inputs", digests_to_json(inputs)},
              {"outputs", digests_to_json(outputs)},
              {"timing_ms", timing}};
}

RunManifest RunManifest::from_json(const json& doc) {
  try {
    RunManifest m;
    m.tool_version = doc.at("tool_version").get<std::string>();
    m.command = doc.at("command").get<std::string>();
    m.seed = doc.at("seed").get<std::uint64_t>();
    const ConfigOverrides o = overrides_from_json(doc.at("config"));
    m.config = resolve_config(o, {}, std::nullopt);
    m.inputs = digests_from_json(doc.at("inputs"));
    m.outputs = digests_from_json(doc.at("outputs"));
    for (const auto& [stage, ms] : doc.at("timing_ms").items()) {
      m.timing_ms.emplace_back(stage, ms.get<double>());
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  }
}

}  // namespace rainweave::app
