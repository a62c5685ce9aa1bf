#pragma once

#include <cstddef>
#include <vector>

#include "rainweave/image.hpp"
#include "rainweave/rng.hpp"

namespace rainweave {

// A rain patch with its per-channel mean removed: the signed, zero-mean
// layer that carries streak structure without local brightness. Values lie
// in [-1, 1] on the kRainQuantum grid.
class ResidualPatch {
public:
  ResidualPatch() = default;

  // Adopts an existing signed field, checking range and per-channel zero
  // mean (within 1e-6 per pixel). Throws FormatError otherwise.
  static ResidualPatch from_field(Field values);

  int height() const { return values_.height(); }
  int width() const { return values_.width(); }
  int size() const { return values_.height(); }
  int channels() const { return values_.channels(); }
  double at(int row, int col, int ch) const { return values_.at(row, col, ch); }
  const Field& values() const { return values_; }

  bool operator==(const ResidualPatch&) const = default;

private:
  explicit ResidualPatch(Field values) : values_(std::move(values)) {}
  friend ResidualPatch residual_of(const ImageBuffer& patch);

  Field values_;
};

// Residual patches plus the exemplar windows they came from (parallel lists).
struct PatchBank {
  std::vector<ResidualPatch> patches;
  std::vector<PatchRef> source_refs;

  std::size_t size() const { return patches.size(); }
  bool empty() const { return patches.empty(); }
  int patch_size() const { return patches.empty() ? 0 : patches.front().size(); }
  int channels() const { return patches.empty() ? 0 : patches.front().channels(); }
};

// Per-channel mean removal. The mean is snapped to kRainQuantum so codec
// inputs give residuals that are exact differences.
ResidualPatch residual_of(const ImageBuffer& patch);

// Fraction of rain pixels inside the window.
double patch_coverage(const RainMask& mask, const PatchRef& ref);

// Every stride-1 window of side `size`, row-major, whose coverage reaches
// `threshold`. An empty result is not an error.
std::vector<PatchRef> enumerate_valid_positions(const RainMask& mask, int size, double threshold);

// Draws `count` windows uniformly with replacement from the valid positions
// (one rng.pick per draw, in order) and returns their residuals.
PatchBank sample_rain_patches(const ImageBuffer& exemplar, const RainMask& mask, int size,
                              double threshold, std::size_t count, Rng& rng);

}  // namespace rainweave
