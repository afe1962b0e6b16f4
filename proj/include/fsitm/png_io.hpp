#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fsitm/errors.hpp"

namespace fsitm {

/// 8-bit raster as decoded from a PNG. Rows top-down, channels interleaved.
struct ByteRaster {
    int width = 0;
    int height = 0;
    int channels = 0; // 1 (gray) or 3 (rgb)
    std::vector<std::uint8_t> samples;
};

/// Reads an 8-bit PNG (gray, gray+alpha, RGB or RGBA; alpha is discarded).
/// 16-bit files raise UnsupportedBitDepth, palette files UnsupportedFormat.
ByteRaster read_png(const std::filesystem::path& path);

/// Writes an 8-bit grayscale or RGB PNG.
void write_png(const std::filesystem::path& path, const ByteRaster& raster);

} // namespace fsitm
