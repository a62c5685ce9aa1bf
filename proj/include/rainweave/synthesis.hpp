#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rainweave/extraction.hpp"
#include "rainweave/image.hpp"
#include "rainweave/quilting.hpp"
#include "rainweave/rng.hpp"

namespace rainweave {

// round(patch_size / 6), at least 2.
int default_overlap(int patch_size);

struct TransferConfig {
  int patch_size = 32;
  int overlap = 5;
  double coverage_threshold = 0.6;
  std::size_t bank_count = 2000;
  int feather = 1;
  std::uint64_t seed = 0;

  // Throws ConfigError when a field is out of range.
  void validate() const;

  bool operator==(const TransferConfig&) const = default;
};

// One aligned (clean, rain) training pair.
struct PairRecord {
  std::size_t target_index = 0;
  PatchRef target_ref;
  std::size_t residual_index = 0;
  ImageBuffer target_patch;
  ImageBuffer synthetic_patch;
};

// What happened at one raster block; handed to a BlockObserver after the
// block is committed. The Field references are only valid during the call.
struct BlockEvent {
  std::size_t block_index = 0;
  PatchRef ref;
  std::size_t residual_index = 0;
  OverlapStrips strips;
  std::optional<SeamPath> vertical_seam;
  std::optional<SeamPath> horizontal_seam;
  const Field& canvas_before;
  const Field& incoming;
  const Field& committed;
};
using BlockObserver = std::function<void(const BlockEvent&)>;

// clamp(target + residual) per value.
ImageBuffer compose_patch(const ResidualPatch& residual, const ImageBuffer& target_patch);

// Raster-order block windows with step patch_size - overlap. The last block
// of each row and column is pulled back to end flush with the image edge.
std::vector<PatchRef> plan_grid(int target_height, int target_width, const TransferConfig& cfg);

// Quilts bank residuals into a signed rain layer of the given size. One
// residual is drawn per block in raster order; its left/top overlaps with
// the committed layer are arbitrated by minimum-error cuts and blended with
// cfg.feather. Layer values stay on the kRainQuantum grid.
Field build_rain_layer(int height, int width, int channels, const PatchBank& bank,
                       const TransferConfig& cfg, Rng& rng, const BlockObserver& observer = {});

// clamp(target + layer) per value.
ImageBuffer apply_rain_layer(const ImageBuffer& target, const Field& layer);

// build_rain_layer over the target's shape, then apply_rain_layer.
ImageBuffer transfer(const ImageBuffer& target, const PatchBank& bank, const TransferConfig& cfg,
                     Rng& rng, const BlockObserver& observer = {});

// Blend-free pair sampling. Each record draws, in order: target index,
// row, column, residual index.
std::vector<PairRecord> generate_pairs(const std::vector<ImageBuffer>& targets,
                                       const PatchBank& bank, std::size_t pair_count,
                                       const TransferConfig& cfg, Rng& rng);

}  // namespace rainweave
