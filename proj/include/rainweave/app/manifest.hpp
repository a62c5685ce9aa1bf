#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rainweave/synthesis.hpp"

namespace rainweave::app {

struct FileDigest {
  std::string role;  // "exemplar", "mask", "target", "config", or an output kind
  std::string path;
  std::string sha256;
};

// Everything needed to reproduce a run from its input files.
struct RunManifest {
  std::string tool_version;
  std::string command;
  std::uint64_t seed = 0;
  TransferConfig config;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
  std::vector<std::pair<std::string, double>> timing_ms;  // stage name -> milliseconds

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& doc);
};

const char* tool_version();

}  // namespace rainweave::app
