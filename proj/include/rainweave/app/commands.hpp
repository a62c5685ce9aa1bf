#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rainweave/app/config.hpp"
#include "rainweave/app/manifest.hpp"

namespace rainweave::app {

// Exit codes, one per failure class.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitIo = 3,
  kExitFormat = 4,
  kExitDimension = 5,
  kExitExtraction = 6,
};

struct CommonArgs {
  std::filesystem::path exemplar;
  std::filesystem::path mask;
  ConfigOverrides flags;
  std::optional<std::filesystem::path> config_file;
  // RAINWEAVE_SEED as read from the environment (nullopt if unset).
  std::optional<std::uint64_t> env_seed;
};

struct TransferArgs : CommonArgs {
  std::vector<std::filesystem::path> targets;
  std::filesystem::path out_dir = "rainweave_out";
  // Also write <stem>_layer.png, the rain layer shown as 0.5 + residual.
  bool write_layer = false;
};

struct PairsArgs : CommonArgs {
  std::vector<std::filesystem::path> targets;
  std::filesystem::path out_dir = "rainweave_out";
  std::size_t count = 0;
};

struct InspectArgs : CommonArgs {
  std::optional<std::filesystem::path> montage;
};

struct ChannelStats {
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;
};

struct InspectReport {
  int height = 0;
  int width = 0;
  int channels = 0;
  TransferConfig config;
  std::size_t valid_positions = 0;
  double mask_coverage = 0.0;
  std::size_t sampled_patches = 0;
  std::vector<ChannelStats> residual_stats;  // empty when nothing could be sampled
  bool montage_written = false;
};

// Each command stages its files and commits them only after every output
// is written, so on any exception the output directory is left as it was.
// Random streams: the patch bank uses Rng::for_stream(seed, 0); target k
// in `transfer` uses stream k + 1; `pairs` draws records from stream 1.
RunManifest cmd_transfer(const TransferArgs& args);
RunManifest cmd_pairs(const PairsArgs& args);
InspectReport cmd_inspect(const InspectArgs& args);

void print_report(const InspectReport& report, std::ostream& out);

// Maps a caught exception to an exit code and writes one diagnostic line.
int report_failure(std::ostream& err);

}  // namespace rainweave::app
