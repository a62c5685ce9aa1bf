#include "rainweave/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "rainweave/error.hpp"

namespace rainweave {

namespace {

struct FileCloser {
  void operator()(std::FILE* fp) const { std::fclose(fp); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports failures through longjmp; the message is stashed here so
// the C++ side can throw after control is back outside the setjmp frames.
struct PngErrorSink {
  std::array<char, 256> message{};
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
  if (sink != nullptr) {
    std::snprintf(sink->message.data(), sink->message.size(), "%s", msg);
  }
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

struct PngHeader {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
};

// Only POD state lives between setjmp and any longjmp in these two helpers.
bool read_header(png_structp png, png_infop info, PngHeader* header) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  int interlace = 0;
  png_get_IHDR(png, info, &header->width, &header->height, &header->bit_depth,
               &header->color_type, &interlace, nullptr, nullptr);
  return true;
}

bool read_rows(png_structp png, png_infop info, png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  png_read_image(png, rows);
  png_read_end(png, nullptr);
  return true;
}

bool write_all(png_structp png, png_infop info, std::FILE* fp, png_uint_32 width,
               png_uint_32 height, int color_type, png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, fp);
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, nullptr);
  return true;
}

std::string color_type_name(int color_type) {
  switch (color_type) {
    case PNG_COLOR_TYPE_GRAY: return "grayscale";
    case PNG_COLOR_TYPE_GRAY_ALPHA: return "grayscale+alpha";
    case PNG_COLOR_TYPE_RGB: return "RGB";
    case PNG_COLOR_TYPE_RGB_ALPHA: return "RGBA";
    case PNG_COLOR_TYPE_PALETTE: return "palette";
    default: return "unknown(" + std::to_string(color_type) + ")";
  }
}

struct DecodedPng {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<std::uint8_t> codes;
};

DecodedPng decode_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));

  std::array<png_byte, 8> signature{};
  const std::size_t got = std::fread(signature.data(), 1, signature.size(), fp.get());
  // A short read that still matches the signature prefix is a truncated
  // PNG; anything else is not a PNG at all.
  if (got > 0 && png_sig_cmp(signature.data(), 0, got) != 0) {
    throw FormatError(path.string() + ": not a PNG file (bad signature)");
  }
  if (got != signature.size()) throw IoError(path.string() + ": file truncated before PNG signature");

  PngErrorSink sink;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
  if (png == nullptr) throw IoError("libpng: cannot allocate read struct");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng: cannot allocate info struct");
  }
  auto destroy = [&] { png_destroy_read_struct(&png, &info, nullptr); };

  png_init_io(png, fp.get());
  PngHeader header;
  if (!read_header(png, info, &header)) {
    std::string msg = sink.message.data();
    destroy();
    throw IoError(path.string() + ": unreadable PNG header: " + msg);
  }

  if (header.bit_depth != 8) {
    destroy();
    throw FormatError(path.string() + ": unsupported bit depth " +
                      std::to_string(header.bit_depth) + " (only 8-bit PNGs are accepted)");
  }
  int stored_channels = 0;
  int channels = 0;
  switch (header.color_type) {
    case PNG_COLOR_TYPE_GRAY: stored_channels = 1; channels = 1; break;
    case PNG_COLOR_TYPE_GRAY_ALPHA: stored_channels = 2; channels = 1; break;
    case PNG_COLOR_TYPE_RGB: stored_channels = 3; channels = 3; break;
    case PNG_COLOR_TYPE_RGB_ALPHA: stored_channels = 4; channels = 3; break;
    default:
      destroy();
      throw FormatError(path.string() + ": unsupported color type " +
                        color_type_name(header.color_type) +
                        " (only grayscale or RGB, optionally with alpha)");
  }

  const auto width = static_cast<std::size_t>(header.width);
  const auto height = static_cast<std::size_t>(header.height);
  std::vector<png_byte> raw(width * height * stored_channels);
  std::vector<png_bytep> rows(height);
  for (std::size_t r = 0; r < height; ++r) rows[r] = raw.data() + r * width * stored_channels;

  if (!read_rows(png, info, rows.data())) {
    std::string msg = sink.message.data();
    destroy();
    throw IoError(path.string() + ": corrupt or truncated PNG data: " + msg);
  }
  destroy();

  DecodedPng out;
  out.height = static_cast<int>(height);
  out.width = static_cast<int>(width);
  out.channels = channels;
  out.codes.resize(width * height * channels);
  for (std::size_t px = 0; px < width * height; ++px) {
    for (int c = 0; c < channels; ++c) {
      out.codes[px * channels + c] = raw[px * stored_channels + c];
    }
  }
  return out;
}

}  // namespace

ImageBuffer load_image(const std::filesystem::path& path) {
  DecodedPng png = decode_png(path);
  return ImageBuffer::from_codes(png.height, png.width, png.channels, png.codes);
}

RainMask load_mask(const std::filesystem::path& path) {
  DecodedPng png = decode_png(path);
  std::vector<std::uint8_t> rain(static_cast<std::size_t>(png.height) * png.width);
  for (std::size_t px = 0; px < rain.size(); ++px) {
    auto first = png.codes.begin() + static_cast<std::ptrdiff_t>(px * png.channels);
    rain[px] = *std::max_element(first, first + png.channels) > 127 ? 1 : 0;
  }
  return RainMask(png.height, png.width, std::move(rain));
}

void save_image(const ImageBuffer& img, const std::filesystem::path& path) {
  std::vector<std::uint8_t> codes = img.to_codes();
  const auto width = static_cast<std::size_t>(img.width());
  const auto height = static_cast<std::size_t>(img.height());
  const auto channels = static_cast<std::size_t>(img.channels());
  std::vector<png_bytep> rows(height);
  for (std::size_t r = 0; r < height; ++r) rows[r] = codes.data() + r * width * channels;

  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot write " + path.string() + ": " + std::strerror(errno));

  PngErrorSink sink;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
  if (png == nullptr) throw IoError("libpng: cannot allocate write struct");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng: cannot allocate info struct");
  }
  const int color_type = channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  const bool ok = write_all(png, info, fp.get(), static_cast<png_uint_32>(width),
                            static_cast<png_uint_32>(height), color_type, rows.data());
  png_destroy_write_struct(&png, &info);
  if (!ok) throw IoError(path.string() + ": PNG encoding failed: " + sink.message.data());
  if (std::fflush(fp.get()) != 0 || std::ferror(fp.get())) {
    throw IoError("write error on " + path.string());
  }
}

}  // namespace rainweave
