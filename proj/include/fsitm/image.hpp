#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsitm/errors.hpp"

namespace fsitm {

/// Color channel selector.
enum class ChannelId { R, G, B };

std::string_view to_string(ChannelId c);

/// Parses "R"/"G"/"B" (case-insensitive). Throws InvalidArgument otherwise.
ChannelId parse_channel(std::string_view s);

/// 2D grid of real samples, row-major. The universal raster currency.
///
/// Invariants: samples.size() == width*height, width and height at least
/// kMinDimension, every sample finite.
class ImagePlane {
public:
    static constexpr int kMinDimension = 8;

    ImagePlane(int width, int height, std::vector<double> samples);

    static ImagePlane filled(int width, int height, double value);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return samples_.size(); }

    double at(int x, int y) const { return samples_[static_cast<std::size_t>(y) * width_ + x]; }
    double& at(int x, int y) { return samples_[static_cast<std::size_t>(y) * width_ + x]; }

    std::span<const double> samples() const { return samples_; }
    std::span<double> samples() { return samples_; }

    bool same_size(const ImagePlane& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    int width_;
    int height_;
    std::vector<double> samples_;
};

double min_sample(const ImagePlane& p);
double max_sample(const ImagePlane& p);

/// Whether an HDR image holds linear radiance or log-compressed values.
/// The non-negativity invariant applies only to linear radiance.
enum class RadianceDomain { Linear, LogCompressed };

/// 3-channel scene-referred image. Linear radiance is unbounded positive;
/// log-compressed planes may be negative.
class HdrImage {
public:
    HdrImage(ImagePlane r, ImagePlane g, ImagePlane b, std::string source_path = {},
             RadianceDomain domain = RadianceDomain::Linear);

    const ImagePlane& plane(ChannelId c) const;
    const ImagePlane& r() const { return r_; }
    const ImagePlane& g() const { return g_; }
    const ImagePlane& b() const { return b_; }

    int width() const { return r_.width(); }
    int height() const { return r_.height(); }
    RadianceDomain domain() const { return domain_; }
    const std::string& source_path() const { return source_path_; }

private:
    ImagePlane r_, g_, b_;
    std::string source_path_;
    RadianceDomain domain_;
};

/// 3-channel display-referred image, every sample in [0, 1].
class LdrImage {
public:
    LdrImage(ImagePlane r, ImagePlane g, ImagePlane b, std::string source_path = {});

    const ImagePlane& plane(ChannelId c) const;
    const ImagePlane& r() const { return r_; }
    const ImagePlane& g() const { return g_; }
    const ImagePlane& b() const { return b_; }

    int width() const { return r_.width(); }
    int height() const { return r_.height(); }
    const std::string& source_path() const { return source_path_; }

private:
    ImagePlane r_, g_, b_;
    std::string source_path_;
};

} // namespace fsitm
