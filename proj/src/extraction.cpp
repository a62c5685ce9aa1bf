#include "rainweave/extraction.hpp"

#include <cmath>
#include <sstream>

#include "rainweave/error.hpp"

namespace rainweave {

namespace {

// Summed-area table over the mask, (H+1) x (W+1).
class MaskIntegral {
public:
  explicit MaskIntegral(const RainMask& mask)
      : stride_(static_cast<std::size_t>(mask.width()) + 1),
        sums_(stride_ * (static_cast<std::size_t>(mask.height()) + 1), 0) {
    for (int r = 0; r < mask.height(); ++r) {
      long long row_sum = 0;
      for (int c = 0; c < mask.width(); ++c) {
        row_sum += mask.at(r, c) ? 1 : 0;
        sums_[(r + 1) * stride_ + c + 1] = sums_[r * stride_ + c + 1] + row_sum;
      }
    }
  }

  long long window(int row, int col, int size) const {
    const std::size_t r0 = row, c0 = col, r1 = row + size, c1 = col + size;
    return sums_[r1 * stride_ + c1] - sums_[r0 * stride_ + c1] - sums_[r1 * stride_ + c0] +
           sums_[r0 * stride_ + c0];
  }

private:
  std::size_t stride_;
  std::vector<long long> sums_;
};

double coverage_fraction(long long count, int size) {
  return static_cast<double>(count) / (static_cast<double>(size) * size);
}

}  // namespace

ResidualPatch ResidualPatch::from_field(Field values) {
  if (values.empty()) throw FormatError("residual patch is empty");
  const int channels = values.channels();
  const auto pixels = static_cast<double>(values.height()) * values.width();
  std::vector<double> sums(channels, 0.0);
  for (int r = 0; r < values.height(); ++r) {
    for (int c = 0; c < values.width(); ++c) {
      for (int ch = 0; ch < channels; ++ch) {
        const double v = values.at(r, c, ch);
        if (!(v >= -1.0 && v <= 1.0)) {
          throw FormatError("residual value " + std::to_string(v) + " outside [-1, 1]");
        }
        sums[ch] += v;
      }
    }
  }
  for (int ch = 0; ch < channels; ++ch) {
    if (std::abs(sums[ch]) > 1e-6 * pixels) {
      throw FormatError("residual channel " + std::to_string(ch) + " is not zero-mean (sum " +
                        std::to_string(sums[ch]) + ")");
    }
  }
  return ResidualPatch(std::move(values));
}

ResidualPatch residual_of(const ImageBuffer& patch) {
  const int channels = patch.channels();
  const auto pixels = static_cast<double>(patch.height()) * patch.width();
  std::vector<double> means(channels, 0.0);
  for (int r = 0; r < patch.height(); ++r) {
    for (int c = 0; c < patch.width(); ++c) {
      for (int ch = 0; ch < channels; ++ch) means[ch] += patch.at(r, c, ch);
    }
  }
  for (auto& m : means) m = snap_to_quantum(m / pixels);

  Field out(patch.height(), patch.width(), channels);
  for (int r = 0; r < patch.height(); ++r) {
    for (int c = 0; c < patch.width(); ++c) {
      for (int ch = 0; ch < channels; ++ch) {
        out.at(r, c, ch) = snap_to_quantum(static_cast<double>(patch.at(r, c, ch)) - means[ch]);
      }
    }
  }
  return ResidualPatch(std::move(out));
}

double patch_coverage(const RainMask& mask, const PatchRef& ref) {
  check_in_bounds(ref, mask.height(), mask.width());
  long long count = 0;
  for (int r = ref.row; r < ref.row + ref.size; ++r) {
    for (int c = ref.col; c < ref.col + ref.size; ++c) count += mask.at(r, c) ? 1 : 0;
  }
  return coverage_fraction(count, ref.size);
}

std::vector<PatchRef> enumerate_valid_positions(const RainMask& mask, int size, double threshold) {
  if (size < 1 || size > mask.height() || size > mask.width()) {
    std::ostringstream msg;
    msg << "patch size " << size << " does not fit mask of " << mask.height() << "x"
        << mask.width();
    throw DimensionError(msg.str());
  }
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ConfigError("coverage threshold must be in (0, 1], got " + std::to_string(threshold));
  }
  const MaskIntegral integral(mask);
  std::vector<PatchRef> refs;
  for (int r = 0; r + size <= mask.height(); ++r) {
    for (int c = 0; c + size <= mask.width(); ++c) {
      if (coverage_fraction(integral.window(r, c, size), size) >= threshold) {
        refs.push_back({r, c, size});
      }
    }
  }
  return refs;
}

PatchBank sample_rain_patches(const ImageBuffer& exemplar, const RainMask& mask, int size,
                              double threshold, std::size_t count, Rng& rng) {
  if (exemplar.height() != mask.height() || exemplar.width() != mask.width()) {
    std::ostringstream msg;
    msg << "mask is " << mask.height() << "x" << mask.width() << " but exemplar is "
        << exemplar.height() << "x" << exemplar.width();
    throw DimensionError(msg.str());
  }
  if (count == 0) throw ConfigError("patch bank count must be positive");

  const std::vector<PatchRef> valid = enumerate_valid_positions(mask, size, threshold);
  if (valid.empty()) {
    std::ostringstream msg;
    msg << "no " << size << "x" << size << " window reaches rain coverage " << threshold
        << " in the mask; lower the coverage threshold or enlarge the rain regions";
    throw ExtractionError(msg.str());
  }

  PatchBank bank;
  bank.patches.reserve(count);
  bank.source_refs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const PatchRef& ref = valid[rng.pick(valid.size())];
    bank.source_refs.push_back(ref);
    bank.patches.push_back(residual_of(get_patch(exemplar, ref)));
  }
  return bank;
}

}  // namespace rainweave
