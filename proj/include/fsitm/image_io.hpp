#pragma once

#include <filesystem>

#include "fsitm/image.hpp"

namespace fsitm {

/// Loads a linear-radiance image from a Radiance RGBE (.hdr) or PFM (.pfm)
/// file, sniffed by magic bytes. Grayscale PFMs are promoted to 3 channels.
HdrImage load_hdr(const std::filesystem::path& path);

/// Loads an 8-bit PNG, mapping each code v to v/255. Grayscale files are
/// promoted to 3 identical channels; alpha is discarded.
LdrImage load_ldr(const std::filesystem::path& path);

/// Log-compresses one plane: ln(x + eps), where eps is the plane's smallest
/// positive sample when the plane contains zeros and 0 otherwise. Throws
/// AllZeroPlane when no positive sample exists.
ImagePlane log_compress(const ImagePlane& plane);

/// Log-compresses all three planes of a linear-radiance image.
HdrImage log_compress(const HdrImage& img);

const ImagePlane& extract_channel(const HdrImage& img, ChannelId c);
const ImagePlane& extract_channel(const LdrImage& img, ChannelId c);

void save_hdr_pfm(const std::filesystem::path& path, const HdrImage& img);
void save_hdr_rgbe(const std::filesystem::path& path, const HdrImage& img);
void save_ldr_png(const std::filesystem::path& path, const LdrImage& img);

/// Writes a single plane as a grayscale PFM (used for phase-map dumps).
void save_plane_pfm(const std::filesystem::path& path, const ImagePlane& plane);

} // namespace fsitm
