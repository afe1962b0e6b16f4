#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "fsitm/pfm.hpp"

namespace fsitm {

/// Decodes one shared-exponent RGBE pixel. A zero exponent byte encodes
/// black; otherwise each channel is (mantissa + 0.5) / 256 * 2^(e - 128).
std::array<float, 3> rgbe_decode(std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t e);

/// Encodes a pixel into RGBE. Inverse of rgbe_decode up to mantissa
/// quantization (relative error at most 1/256 on the dominant channel).
std::array<std::uint8_t, 4> rgbe_encode(float r, float g, float b);

/// Reads a Radiance picture (.hdr). Accepts flat and adaptive-RLE scanlines;
/// only the standard "-Y h +X w" orientation is supported.
FloatRaster read_rgbe(const std::filesystem::path& path);

/// Writes a Radiance picture with adaptive-RLE scanlines where the format
/// allows (width in [8, 32767]), flat otherwise.
void write_rgbe(const std::filesystem::path& path, const FloatRaster& raster);

} // namespace fsitm
