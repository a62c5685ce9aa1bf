#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rainweave {

// Dense H x W x C array, row-major with channels interleaved.
template <typename T>
class Raster {
public:
  Raster() = default;
  Raster(int height, int width, int channels, T fill = T{});
  Raster(int height, int width, int channels, std::vector<T> data);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t index(int row, int col, int ch) const {
    return (static_cast<std::size_t>(row) * width_ + col) * channels_ + ch;
  }
  T& at(int row, int col, int ch) { return data_[index(row, col, ch)]; }
  const T& at(int row, int col, int ch) const { return data_[index(row, col, ch)]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  bool same_shape(const Raster& other) const {
    return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
  }

  // Copy of the window [row, row+rows) x [col, col+cols). Caller checks bounds.
  Raster crop(int row, int col, int rows, int cols) const;
  // Writes `src` with its top-left corner at (row, col). Caller checks bounds.
  void paste(const Raster& src, int row, int col);

  bool operator==(const Raster&) const = default;

private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<T> data_;
};

// Signed real regions: residual patches, the residual canvas, blend inputs.
using Field = Raster<double>;

// Top-left corner and side length of a square window.
struct PatchRef {
  int row = 0;
  int col = 0;
  int size = 0;

  bool operator==(const PatchRef&) const = default;
};

// Image with every channel value in [0, 1]. Channels is 1 (gray) or 3 (RGB).
class ImageBuffer {
public:
  ImageBuffer() = default;
  // Throws DimensionError on bad shape, FormatError on values outside [0, 1].
  ImageBuffer(int height, int width, int channels, std::vector<float> data);
  ImageBuffer(int height, int width, int channels, float fill);

  static ImageBuffer from_codes(int height, int width, int channels,
                                std::span<const std::uint8_t> codes);
  std::vector<std::uint8_t> to_codes() const;

  int height() const { return pixels_.height(); }
  int width() const { return pixels_.width(); }
  int channels() const { return pixels_.channels(); }
  std::size_t size() const { return pixels_.size(); }

  float at(int row, int col, int ch) const { return pixels_.at(row, col, ch); }
  std::span<const float> data() const { return pixels_.data(); }
  const Raster<float>& raster() const { return pixels_; }

  bool operator==(const ImageBuffer&) const = default;

private:
  explicit ImageBuffer(Raster<float> pixels) : pixels_(std::move(pixels)) {}
  friend ImageBuffer get_patch(const ImageBuffer& img, const PatchRef& ref);

  Raster<float> pixels_;
};

// Boolean rain map; true marks a rain pixel.
class RainMask {
public:
  RainMask() = default;
  RainMask(int height, int width, std::vector<std::uint8_t> data);
  RainMask(int height, int width, bool fill);

  int height() const { return height_; }
  int width() const { return width_; }
  bool at(int row, int col) const { return data_[static_cast<std::size_t>(row) * width_ + col] != 0; }
  std::size_t count() const;

  bool operator==(const RainMask&) const = default;

private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> data_;
};

// 8-bit codec. unit_from_code(k) is k / 255 in float; code_from_unit rounds half up.
float unit_from_code(std::uint8_t code);
std::uint8_t code_from_unit(double value);

// The rain layer lives on a dyadic grid of step 2^-32. Codec values are
// already on it, so sums of target and rain values are exact in double and
// target content cancels exactly between two synthetic candidates.
inline constexpr double kRainQuantum = 0x1p-32;
double snap_to_quantum(double value);

// Copy of a square window. Throws BoundsError if the window leaves the image.
ImageBuffer get_patch(const ImageBuffer& img, const PatchRef& ref);

// Throws BoundsError unless the window fits inside height x width.
void check_in_bounds(const PatchRef& ref, int height, int width);

}  // namespace rainweave
