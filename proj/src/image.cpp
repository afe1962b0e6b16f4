#include "fsitm/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fmt/format.h>

namespace fsitm {

std::string_view to_string(ChannelId c) {
    switch (c) {
    case ChannelId::R: return "R";
    case ChannelId::G: return "G";
    case ChannelId::B: return "B";
    }
    return "?";
}

ChannelId parse_channel(std::string_view s) {
    if (s.size() == 1) {
        switch (std::toupper(static_cast<unsigned char>(s[0]))) {
        case 'R': return ChannelId::R;
        case 'G': return ChannelId::G;
        case 'B': return ChannelId::B;
        }
    }
    throw InvalidArgument(fmt::format("invalid channel '{}', expected R, G or B", s));
}

ImagePlane::ImagePlane(int width, int height, std::vector<double> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
    if (width_ < kMinDimension || height_ < kMinDimension) {
        throw InvalidImage(fmt::format("plane {}x{} is below the {}x{} minimum", width_, height_,
                                       kMinDimension, kMinDimension));
    }
    if (samples_.size() != static_cast<std::size_t>(width_) * height_) {
        throw InvalidImage(fmt::format("plane {}x{} expects {} samples, got {}", width_, height_,
                                       static_cast<std::size_t>(width_) * height_, samples_.size()));
    }
    for (double v : samples_) {
        if (!std::isfinite(v)) {
            throw InvalidImage("plane contains a non-finite sample");
        }
    }
}

ImagePlane ImagePlane::filled(int width, int height, double value) {
    return ImagePlane(width, height,
                      std::vector<double>(static_cast<std::size_t>(width) * height, value));
}

double min_sample(const ImagePlane& p) {
    return *std::ranges::min_element(p.samples());
}

double max_sample(const ImagePlane& p) {
    return *std::ranges::max_element(p.samples());
}

namespace {

void check_planes(const ImagePlane& r, const ImagePlane& g, const ImagePlane& b) {
    if (!r.same_size(g) || !r.same_size(b)) {
        throw DimensionMismatch("image planes differ in size");
    }
}

} // namespace

HdrImage::HdrImage(ImagePlane r, ImagePlane g, ImagePlane b, std::string source_path,
                   RadianceDomain domain)
    : r_(std::move(r)), g_(std::move(g)), b_(std::move(b)),
      source_path_(std::move(source_path)), domain_(domain) {
    check_planes(r_, g_, b_);
    if (domain_ == RadianceDomain::Linear) {
        for (const ImagePlane* p : {&r_, &g_, &b_}) {
            for (double v : p->samples()) {
                if (v < 0.0) {
                    throw InvalidImage("linear radiance sample is negative");
                }
            }
        }
    }
}

const ImagePlane& HdrImage::plane(ChannelId c) const {
    switch (c) {
    case ChannelId::R: return r_;
    case ChannelId::G: return g_;
    case ChannelId::B: return b_;
    }
    return r_;
}

LdrImage::LdrImage(ImagePlane r, ImagePlane g, ImagePlane b, std::string source_path)
    : r_(std::move(r)), g_(std::move(g)), b_(std::move(b)), source_path_(std::move(source_path)) {
    check_planes(r_, g_, b_);
    for (const ImagePlane* p : {&r_, &g_, &b_}) {
        for (double v : p->samples()) {
            if (v < 0.0 || v > 1.0) {
                throw InvalidImage("display-referred sample outside [0, 1]");
            }
        }
    }
}

const ImagePlane& LdrImage::plane(ChannelId c) const {
    switch (c) {
    case ChannelId::R: return r_;
    case ChannelId::G: return g_;
    case ChannelId::B: return b_;
    }
    return r_;
}

} // namespace fsitm
