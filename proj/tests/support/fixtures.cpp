#include "fixtures.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "rainweave/png_io.hpp"

namespace rainweave::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  std::random_device rd;
  for (int attempt = 0; attempt < 100; ++attempt) {
    fs::path candidate = fs::temp_directory_path() / ("rainweave-" + tag + "-" + std::to_string(rd()));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create temp dir");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

bool write_png_rows(png_structp png, png_infop info, std::FILE* fp, int width, int height,
                    int bit_depth, int color_type, png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, fp);
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    static png_color palette[2] = {{0, 0, 0}, {255, 255, 255}};
    png_set_PLTE(png, info, palette, 2);
  }
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, nullptr);
  return true;
}

}  // namespace

void write_raw_png(const fs::path& path, int width, int height, int bit_depth, int color_type,
                   const std::vector<std::uint8_t>& bytes) {
  const int samples = color_type == PNG_COLOR_TYPE_RGB         ? 3
                      : color_type == PNG_COLOR_TYPE_RGB_ALPHA ? 4
                      : color_type == PNG_COLOR_TYPE_GRAY_ALPHA ? 2
                                                                : 1;
  const std::size_t row_bytes = (static_cast<std::size_t>(width) * samples * bit_depth + 7) / 8;
  if (bytes.size() != row_bytes * height) throw std::runtime_error("write_raw_png: bad byte count");
  std::vector<std::uint8_t> copy(bytes);
  std::vector<png_bytep> rows(height);
  for (int r = 0; r < height; ++r) rows[r] = copy.data() + r * row_bytes;

  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw std::runtime_error("write_raw_png: cannot open");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  const bool ok = write_png_rows(png, info, fp, width, height, bit_depth, color_type, rows.data());
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
  if (!ok) throw std::runtime_error("write_raw_png: libpng failed");
}

ImageBuffer random_code_image(int height, int width, int channels, std::mt19937_64& gen) {
  std::uniform_int_distribution<int> code(0, 255);
  std::vector<std::uint8_t> codes(static_cast<std::size_t>(height) * width * channels);
  for (auto& c : codes) c = static_cast<std::uint8_t>(code(gen));
  return ImageBuffer::from_codes(height, width, channels, codes);
}

RainScene make_rain_scene(int height, int width, int channels, int rain_from_col,
                          std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::uint8_t> codes(static_cast<std::size_t>(height) * width * channels);
  std::vector<double> rain(static_cast<std::size_t>(height) * width, 0.0);

  // Streaks: short slanted segments, 1 px wide, brightness 0.25..0.5.
  const int streaks = std::max(1, (height * (width - rain_from_col)) / 60);
  for (int s = 0; s < streaks; ++s) {
    const double x0 = rain_from_col + unit(gen) * (width - rain_from_col);
    const double y0 = unit(gen) * height;
    const double len = 6.0 + unit(gen) * 14.0;
    const double amp = 0.25 + 0.25 * unit(gen);
    for (int t = 0; t < static_cast<int>(len); ++t) {
      const int x = static_cast<int>(x0 + 0.3 * t);
      const int y = static_cast<int>(y0 + t);
      if (x >= rain_from_col && x < width && y >= 0 && y < height) {
        rain[static_cast<std::size_t>(y) * width + x] = std::max(rain[static_cast<std::size_t>(y) * width + x], amp);
      }
    }
  }
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      for (int ch = 0; ch < channels; ++ch) {
        const double base = 0.2 + 0.3 * r / height + 0.1 * ch / 3.0 + 0.05 * std::sin(c * 0.2);
        const double v = std::clamp(base + rain[static_cast<std::size_t>(r) * width + c], 0.0, 1.0);
        codes[(static_cast<std::size_t>(r) * width + c) * channels + ch] =
            static_cast<std::uint8_t>(std::lround(v * 255.0));
      }
    }
  }
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(height) * width, 0);
  for (int r = 0; r < height; ++r) {
    for (int c = rain_from_col; c < width; ++c) mask[static_cast<std::size_t>(r) * width + c] = 1;
  }
  return {ImageBuffer::from_codes(height, width, channels, codes),
          RainMask(height, width, std::move(mask))};
}

ImageBuffer make_target(int height, int width, int channels, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double cx = unit(gen) * width;
  const double cy = unit(gen) * height;
  const double radius = 0.25 * std::min(height, width) + 1.0;
  std::vector<std::uint8_t> codes(static_cast<std::size_t>(height) * width * channels);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double d = std::hypot(r - cy, c - cx) / radius;
      for (int ch = 0; ch < channels; ++ch) {
        const double v = 0.15 + 0.5 * c / width + 0.2 * std::exp(-d * d) + 0.05 * ch;
        codes[(static_cast<std::size_t>(r) * width + c) * channels + ch] =
            static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
      }
    }
  }
  return ImageBuffer::from_codes(height, width, channels, codes);
}

void save_mask(const RainMask& mask, const fs::path& path) {
  std::vector<std::uint8_t> codes(static_cast<std::size_t>(mask.height()) * mask.width());
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) codes[static_cast<std::size_t>(r) * mask.width() + c] = mask.at(r, c) ? 255 : 0;
  }
  save_image(ImageBuffer::from_codes(mask.height(), mask.width(), 1, codes), path);
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace rainweave::testing
