#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "rainweave/synthesis.hpp"

namespace rainweave::app {

// Values given on the command line; unset fields fall through.
struct ConfigOverrides {
  std::optional<int> patch_size;
  std::optional<int> overlap;
  std::optional<double> coverage_threshold;
  std::optional<std::size_t> bank_count;
  std::optional<int> feather;
  std::optional<std::uint64_t> seed;
};

nlohmann::json config_to_json(const TransferConfig& cfg);

// Reads a flat JSON object using TransferConfig field names. Unknown keys
// and wrongly typed values raise ConfigError.
ConfigOverrides overrides_from_json(const nlohmann::json& doc);
ConfigOverrides read_config_file(const std::filesystem::path& path);

// Parses a RAINWEAVE_SEED value; nullopt if `text` is null or empty.
std::optional<std::uint64_t> parse_seed(const char* text);

// Field-wise precedence: flags, then config file, then defaults. The seed
// additionally falls back to `env_seed` before its default of 0. When
// patch_size is set but overlap is not, overlap is default_overlap(patch_size).
TransferConfig resolve_config(const ConfigOverrides& flags, const ConfigOverrides& file,
                              std::optional<std::uint64_t> env_seed);

}  // namespace rainweave::app
