#include "rainweave/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rainweave/error.hpp"

namespace rainweave {

namespace {

// Block origins along one axis of length `length`.
std::vector<int> axis_origins(int length, int patch, int step) {
  std::vector<int> origins{0};
  while (origins.back() + patch < length) {
    origins.push_back(std::min(origins.back() + step, length - patch));
  }
  return origins;
}

void check_bank(const PatchBank& bank, int channels, const TransferConfig& cfg) {
  if (bank.empty()) throw ExtractionError("patch bank is empty");
  if (bank.patch_size() != cfg.patch_size) {
    throw DimensionError("bank patches are " + std::to_string(bank.patch_size()) +
                         " px but patch_size is " + std::to_string(cfg.patch_size));
  }
  if (bank.channels() != channels) {
    throw DimensionError("bank patches have " + std::to_string(bank.channels()) +
                         " channels but the target has " + std::to_string(channels));
  }
}

}  // namespace

int default_overlap(int patch_size) {
  return std::max(2, static_cast<int>(std::lround(patch_size / 6.0)));
}

void TransferConfig::validate() const {
  if (patch_size < 2) throw ConfigError("patch_size must be at least 2");
  if (overlap <= 0 || overlap >= patch_size) {
    throw ConfigError("overlap must satisfy 0 < overlap < patch_size (" + std::to_string(overlap) +
                      " vs " + std::to_string(patch_size) + ")");
  }
  if (!(coverage_threshold > 0.0 && coverage_threshold <= 1.0)) {
    throw ConfigError("coverage_threshold must be in (0, 1]");
  }
  if (bank_count == 0) throw ConfigError("bank_count must be positive");
  if (feather < 0) throw ConfigError("feather must be nonnegative");
}

ImageBuffer compose_patch(const ResidualPatch& residual, const ImageBuffer& target_patch) {
  if (residual.height() != target_patch.height() || residual.width() != target_patch.width() ||
      residual.channels() != target_patch.channels()) {
    std::ostringstream msg;
    msg << "residual " << residual.height() << "x" << residual.width() << "x"
        << residual.channels() << " does not match target patch " << target_patch.height() << "x"
        << target_patch.width() << "x" << target_patch.channels();
    throw DimensionError(msg.str());
  }
  std::vector<float> out(target_patch.size());
  auto target = target_patch.data();
  auto rain = residual.values().data();
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = static_cast<float>(std::clamp(static_cast<double>(target[k]) + rain[k], 0.0, 1.0));
  }
  return ImageBuffer(target_patch.height(), target_patch.width(), target_patch.channels(),
                     std::move(out));
}

namespace {

struct GridAxes {
  std::vector<int> rows;
  std::vector<int> cols;
};

GridAxes plan_axes(int target_height, int target_width, const TransferConfig& cfg) {
  cfg.validate();
  if (target_height < cfg.patch_size || target_width < cfg.patch_size) {
    std::ostringstream msg;
    msg << "target " << target_height << "x" << target_width << " is smaller than patch size "
        << cfg.patch_size;
    throw DimensionError(msg.str());
  }
  const int step = cfg.patch_size - cfg.overlap;
  return {axis_origins(target_height, cfg.patch_size, step),
          axis_origins(target_width, cfg.patch_size, step)};
}

}  // namespace

std::vector<PatchRef> plan_grid(int target_height, int target_width, const TransferConfig& cfg) {
  const GridAxes axes = plan_axes(target_height, target_width, cfg);
  std::vector<PatchRef> grid;
  grid.reserve(axes.rows.size() * axes.cols.size());
  for (int r : axes.rows) {
    for (int c : axes.cols) grid.push_back({r, c, cfg.patch_size});
  }
  return grid;
}

Field build_rain_layer(int height, int width, int channels, const PatchBank& bank,
                       const TransferConfig& cfg, Rng& rng, const BlockObserver& observer) {
  cfg.validate();
  check_bank(bank, channels, cfg);
  const GridAxes axes = plan_axes(height, width, cfg);
  const int size = cfg.patch_size;

  Field canvas(height, width, channels, 0.0);
  std::size_t block = 0;
  for (std::size_t i = 0; i < axes.rows.size(); ++i) {
    for (std::size_t j = 0; j < axes.cols.size(); ++j, ++block) {
      const PatchRef ref{axes.rows[i], axes.cols[j], size};
      const std::size_t pick = rng.pick(bank.size());
      const Field& incoming = bank.patches[pick].values();

      // Committed content is the previous block row plus the block to the left.
      OverlapStrips strips;
      if (j > 0) strips.left = axes.cols[j - 1] + size - ref.col;
      if (i > 0) strips.top = axes.rows[i - 1] + size - ref.row;

      const Field before = canvas.crop(ref.row, ref.col, size, size);
      std::optional<SeamPath> vseam;
      std::optional<SeamPath> hseam;
      if (strips.left > 0) {
        vseam = min_cut_vertical(overlap_error_surface(before.crop(0, 0, size, strips.left),
                                                       incoming.crop(0, 0, size, strips.left)));
      }
      if (strips.top > 0) {
        hseam = min_cut_horizontal(overlap_error_surface(before.crop(0, 0, strips.top, size),
                                                         incoming.crop(0, 0, strips.top, size)));
      }
      const BlendMask mask = seam_to_mask(size, strips, vseam, hseam);
      Field committed = blend(before, incoming, mask, cfg.feather);

      // Feathering can leak canvas weight past a strip; uncommitted pixels
      // always take the incoming residual as is.
      for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
          const bool in_strip = r < strips.top || c < strips.left;
          for (int ch = 0; ch < channels; ++ch) {
            double& v = committed.at(r, c, ch);
            v = in_strip ? snap_to_quantum(v) : incoming.at(r, c, ch);
          }
        }
      }
      canvas.paste(committed, ref.row, ref.col);

      if (observer) {
        observer(BlockEvent{block, ref, pick, strips, vseam, hseam, before, incoming, committed});
      }
    }
  }
  return canvas;
}

ImageBuffer apply_rain_layer(const ImageBuffer& target, const Field& layer) {
  if (layer.height() != target.height() || layer.width() != target.width() ||
      layer.channels() != target.channels()) {
    throw DimensionError("rain layer shape does not match the target");
  }
  std::vector<float> out(target.size());
  auto t = target.data();
  auto rain = layer.data();
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = static_cast<float>(std::clamp(static_cast<double>(t[k]) + rain[k], 0.0, 1.0));
  }
  return ImageBuffer(target.height(), target.width(), target.channels(), std::move(out));
}

ImageBuffer transfer(const ImageBuffer& target, const PatchBank& bank, const TransferConfig& cfg,
                     Rng& rng, const BlockObserver& observer) {
  const Field layer =
      build_rain_layer(target.height(), target.width(), target.channels(), bank, cfg, rng, observer);
  return apply_rain_layer(target, layer);
}

std::vector<PairRecord> generate_pairs(const std::vector<ImageBuffer>& targets,
                                       const PatchBank& bank, std::size_t pair_count,
                                       const TransferConfig& cfg, Rng& rng) {
  cfg.validate();
  if (pair_count == 0) return {};
  if (targets.empty()) throw ConfigError("no target images given for pair generation");
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const ImageBuffer& t = targets[k];
    if (t.height() < cfg.patch_size || t.width() < cfg.patch_size) {
      std::ostringstream msg;
      msg << "target " << k << " (" << t.height() << "x" << t.width()
          << ") is smaller than patch size " << cfg.patch_size;
      throw DimensionError(msg.str());
    }
    check_bank(bank, t.channels(), cfg);
  }

  std::vector<PairRecord> records;
  records.reserve(pair_count);
  for (std::size_t n = 0; n < pair_count; ++n) {
    PairRecord rec;
    rec.target_index = rng.pick(targets.size());
    const ImageBuffer& target = targets[rec.target_index];
    rec.target_ref.size = cfg.patch_size;
    rec.target_ref.row = static_cast<int>(rng.pick(static_cast<std::size_t>(target.height() - cfg.patch_size + 1)));
    rec.target_ref.col = static_cast<int>(rng.pick(static_cast<std::size_t>(target.width() - cfg.patch_size + 1)));
    rec.residual_index = rng.pick(bank.size());
    rec.target_patch = get_patch(target, rec.target_ref);
    rec.synthetic_patch = compose_patch(bank.patches[rec.residual_index], rec.target_patch);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace rainweave
