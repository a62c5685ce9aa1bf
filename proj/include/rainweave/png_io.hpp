#pragma once

#include <filesystem>

#include "rainweave/image.hpp"

namespace rainweave {

// Reads an 8-bit grayscale or RGB PNG (an alpha channel is dropped).
// Throws IoError for missing or truncated files and FormatError for
// non-PNG data or an unsupported bit depth / color type.
ImageBuffer load_image(const std::filesystem::path& path);

// Writes an 8-bit PNG, quantizing each value with code_from_unit.
void save_image(const ImageBuffer& img, const std::filesystem::path& path);

// A pixel is rain iff the largest of its channel codes exceeds 127.
RainMask load_mask(const std::filesystem::path& path);

}  // namespace rainweave
