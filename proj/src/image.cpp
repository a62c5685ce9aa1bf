#include "rainweave/image.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rainweave/error.hpp"

namespace rainweave {

namespace {

void check_shape(int height, int width, int channels) {
  if (height < 1 || width < 1 || channels < 1) {
    std::ostringstream msg;
    msg << "invalid raster shape " << height << "x" << width << "x" << channels;
    throw DimensionError(msg.str());
  }
}

}  // namespace

template <typename T>
Raster<T>::Raster(int height, int width, int channels, T fill)
    : height_(height), width_(width), channels_(channels) {
  check_shape(height, width, channels);
  data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

template <typename T>
Raster<T>::Raster(int height, int width, int channels, std::vector<T> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  check_shape(height, width, channels);
  if (data_.size() != static_cast<std::size_t>(height) * width * channels) {
    std::ostringstream msg;
    msg << "raster data length " << data_.size() << " does not match " << height << "x" << width
        << "x" << channels;
    throw DimensionError(msg.str());
  }
}

template <typename T>
Raster<T> Raster<T>::crop(int row, int col, int rows, int cols) const {
  Raster out(rows, cols, channels_);
  const std::size_t run = static_cast<std::size_t>(cols) * channels_;
  for (int r = 0; r < rows; ++r) {
    auto first = data_.begin() + static_cast<std::ptrdiff_t>(index(row + r, col, 0));
    std::copy(first, first + static_cast<std::ptrdiff_t>(run),
              out.data_.begin() + static_cast<std::ptrdiff_t>(out.index(r, 0, 0)));
  }
  return out;
}

template <typename T>
void Raster<T>::paste(const Raster& src, int row, int col) {
  const std::size_t run = static_cast<std::size_t>(src.width_) * channels_;
  for (int r = 0; r < src.height_; ++r) {
    auto first = src.data_.begin() + static_cast<std::ptrdiff_t>(src.index(r, 0, 0));
    std::copy(first, first + static_cast<std::ptrdiff_t>(run),
              data_.begin() + static_cast<std::ptrdiff_t>(index(row + r, col, 0)));
  }
}

template class Raster<float>;
template class Raster<double>;
template class Raster<std::uint8_t>;

ImageBuffer::ImageBuffer(int height, int width, int channels, std::vector<float> data)
    : pixels_(height, width, channels, std::move(data)) {
  if (channels != 1 && channels != 3) {
    throw DimensionError("image must have 1 or 3 channels, got " + std::to_string(channels));
  }
  for (float v : pixels_.data()) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw FormatError("image value " + std::to_string(v) + " outside [0, 1]");
    }
  }
}

ImageBuffer::ImageBuffer(int height, int width, int channels, float fill)
    : ImageBuffer(height, width, channels,
                  std::vector<float>(static_cast<std::size_t>(std::max(height, 0)) *
                                         std::max(width, 0) * std::max(channels, 0),
                                     fill)) {}

ImageBuffer ImageBuffer::from_codes(int height, int width, int channels,
                                    std::span<const std::uint8_t> codes) {
  std::vector<float> values(codes.size());
  std::transform(codes.begin(), codes.end(), values.begin(), unit_from_code);
  return ImageBuffer(height, width, channels, std::move(values));
}

std::vector<std::uint8_t> ImageBuffer::to_codes() const {
  std::vector<std::uint8_t> codes(pixels_.size());
  auto values = pixels_.data();
  std::transform(values.begin(), values.end(), codes.begin(),
                 [](float v) { return code_from_unit(v); });
  return codes;
}

RainMask::RainMask(int height, int width, std::vector<std::uint8_t> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_shape(height, width, 1);
  if (data_.size() != static_cast<std::size_t>(height) * width) {
    throw DimensionError("mask data length does not match " + std::to_string(height) + "x" +
                         std::to_string(width));
  }
  for (auto& v : data_) v = v ? 1 : 0;
}

RainMask::RainMask(int height, int width, bool fill)
    : RainMask(height, width,
               std::vector<std::uint8_t>(
                   static_cast<std::size_t>(std::max(height, 0)) * std::max(width, 0),
                   fill ? 1 : 0)) {}

std::size_t RainMask::count() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

float unit_from_code(std::uint8_t code) { return static_cast<float>(code) / 255.0f; }

std::uint8_t code_from_unit(double value) {
  const double scaled = std::floor(std::clamp(value, 0.0, 1.0) * 255.0 + 0.5);
  return static_cast<std::uint8_t>(scaled);
}

double snap_to_quantum(double value) {
  return std::round(value / kRainQuantum) * kRainQuantum;
}

void check_in_bounds(const PatchRef& ref, int height, int width) {
  if (ref.size < 1 || ref.row < 0 || ref.col < 0 || ref.row + ref.size > height ||
      ref.col + ref.size > width) {
    std::ostringstream msg;
    msg << "patch (row " << ref.row << ", col " << ref.col << ", size " << ref.size
        << ") out of bounds for " << height << "x" << width;
    throw BoundsError(msg.str(), ref.row, ref.col, ref.size);
  }
}

ImageBuffer get_patch(const ImageBuffer& img, const PatchRef& ref) {
  check_in_bounds(ref, img.height(), img.width());
  return ImageBuffer(img.pixels_.crop(ref.row, ref.col, ref.size, ref.size));
}

}  // namespace rainweave
