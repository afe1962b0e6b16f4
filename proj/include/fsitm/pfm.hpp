#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fsitm/errors.hpp"

namespace fsitm {

/// Raw float raster as stored in a PFM file. Codec-level currency with no
/// minimum-size constraint; rows are top-down, channels interleaved.
struct FloatRaster {
    int width = 0;
    int height = 0;
    int channels = 0; // 1 (Pf) or 3 (PF)
    std::vector<float> samples;
};

/// Reads a PFM file ("PF" color or "Pf" grayscale). The scale line's sign
/// selects endianness; rows are stored bottom-up in the file and flipped
/// to top-down here.
FloatRaster read_pfm(const std::filesystem::path& path);

/// Writes a PFM file, always little-endian (scale -1.0).
void write_pfm(const std::filesystem::path& path, const FloatRaster& raster);

} // namespace fsitm
