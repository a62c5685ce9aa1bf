#include "rainweave/app/config.hpp"

#include <charconv>
#include <cstring>
#include <fstream>

#include "rainweave/error.hpp"

namespace rainweave::app {

using nlohmann::json;

json config_to_json(const TransferConfig& cfg) {
  return json{{"patch_size", cfg.patch_size},
              {"overlap", cfg.overlap},
              {"coverage_threshold", cfg.coverage_threshold},
              {"bank_count", cfg.bank_count},
              {"feather", cfg.feather},
              {"seed", cfg.seed}};
}

namespace {

template <typename T>
T field_as(const json& value, const std::string& key) {
  const bool ok = std::is_floating_point_v<T> ? value.is_number()
                  : std::is_unsigned_v<T>     ? value.is_number_unsigned()
                                              : value.is_number_integer();
  if (!ok) throw ConfigError("config field '" + key + "' has the wrong type: " + value.dump());
  return value.get<T>();
}

}  // namespace

ConfigOverrides overrides_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ConfigOverrides o;
  for (const auto& [key, value] : doc.items()) {
    if (key == "patch_size") o.patch_size = field_as<int>(value, key);
    else if (key == "overlap") o.overlap = field_as<int>(value, key);
    else if (key == "coverage_threshold") o.coverage_threshold = field_as<double>(value, key);
    else if (key == "bank_count") o.bank_count = field_as<std::size_t>(value, key);
    else if (key == "feather") o.feather = field_as<int>(value, key);
    else if (key == "seed") o.seed = field_as<std::uint64_t>(value, key);
    else throw ConfigError("unknown config field '" + key + "'");
  }
  return o;
}

ConfigOverrides read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return overrides_from_json(doc);
}

std::optional<std::uint64_t> parse_seed(const char* text) {
  if (text == nullptr || *text == '\0') return std::nullopt;
  std::uint64_t value = 0;
  const char* end = text + std::strlen(text);
  auto [ptr, ec] = std::from_chars(text, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(std::string("RAINWEAVE_SEED is not an unsigned integer: ") + text);
  }
  return value;
}

TransferConfig resolve_config(const ConfigOverrides& flags, const ConfigOverrides& file,
                              std::optional<std::uint64_t> env_seed) {
  auto pick = [](const auto& flag, const auto& from_file, auto fallback) {
    return flag ? *flag : from_file ? *from_file : fallback;
  };
  TransferConfig defaults;
  TransferConfig cfg;
  cfg.patch_size = pick(flags.patch_size, file.patch_size, defaults.patch_size);
  cfg.overlap = pick(flags.overlap, file.overlap, default_overlap(cfg.patch_size));
  cfg.coverage_threshold =
      pick(flags.coverage_threshold, file.coverage_threshold, defaults.coverage_threshold);
  cfg.bank_count = pick(flags.bank_count, file.bank_count, defaults.bank_count);
  cfg.feather = pick(flags.feather, file.feather, defaults.feather);
  cfg.seed = pick(flags.seed, file.seed, env_seed.value_or(defaults.seed));
  cfg.validate();
  return cfg;
}

}  // namespace rainweave::app
