#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "rainweave/image.hpp"

namespace rainweave::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

// Writes a PNG with arbitrary bit depth / color type straight through
// libpng, independent of the library's encoder.
void write_raw_png(const std::filesystem::path& path, int width, int height, int bit_depth,
                   int color_type, const std::vector<std::uint8_t>& bytes);

// libpng color type constants without pulling png.h into every test.
inline constexpr int kPngGray = 0;
inline constexpr int kPngRgb = 2;
inline constexpr int kPngPalette = 3;
inline constexpr int kPngGrayAlpha = 4;
inline constexpr int kPngRgba = 6;

// Image of 8-bit codes drawn uniformly.
ImageBuffer random_code_image(int height, int width, int channels, std::mt19937_64& gen);

// Smooth background with bright diagonal streaks confined to the columns
// at or right of `rain_from_col`; the matching mask marks exactly that band.
struct RainScene {
  ImageBuffer exemplar;
  RainMask mask;
};
RainScene make_rain_scene(int height, int width, int channels, int rain_from_col,
                          std::uint64_t seed);

// Smooth non-rain target (gradients plus a few soft blobs).
ImageBuffer make_target(int height, int width, int channels, std::uint64_t seed);

// Uniform mask image saved as 8-bit gray.
void save_mask(const RainMask& mask, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace rainweave::testing
