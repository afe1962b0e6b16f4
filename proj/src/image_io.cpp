#include "fsitm/image_io.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <limits>

#include "fsitm/pfm.hpp"
#include "fsitm/png_io.hpp"
#include "fsitm/rgbe.hpp"

namespace fsitm {

namespace {

// Splits an interleaved raster into three double planes. Single-channel
// rasters are replicated across R, G and B.
template <typename Sample, typename Map>
std::array<std::vector<double>, 3> deinterleave(int width, int height, int channels,
                                                const std::vector<Sample>& samples, Map map) {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::array<std::vector<double>, 3> planes;
    for (auto& p : planes) {
        p.resize(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (channels == 1) {
            const double v = map(samples[i]);
            planes[0][i] = planes[1][i] = planes[2][i] = v;
        } else {
            planes[0][i] = map(samples[channels * i]);
            planes[1][i] = map(samples[channels * i + 1]);
            planes[2][i] = map(samples[channels * i + 2]);
        }
    }
    return planes;
}

std::array<char, 2> sniff_magic(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    }
    std::array<char, 2> magic{0, 0};
    in.read(magic.data(), 2);
    if (in.gcount() != 2) {
        throw MalformedHeader(fmt::format("'{}' is too short to identify", path.string()));
    }
    return magic;
}

} // namespace

HdrImage load_hdr(const std::filesystem::path& path) {
    const auto magic = sniff_magic(path);
    FloatRaster raster;
    if (magic[0] == '#' && magic[1] == '?') {
        raster = read_rgbe(path);
    } else if (magic[0] == 'P' && (magic[1] == 'F' || magic[1] == 'f')) {
        raster = read_pfm(path);
    } else {
        throw UnsupportedFormat(
            fmt::format("'{}' is neither Radiance RGBE nor PFM", path.string()));
    }
    auto planes = deinterleave(raster.width, raster.height, raster.channels, raster.samples,
                               [](float v) { return static_cast<double>(v); });
    return HdrImage(ImagePlane(raster.width, raster.height, std::move(planes[0])),
                    ImagePlane(raster.width, raster.height, std::move(planes[1])),
                    ImagePlane(raster.width, raster.height, std::move(planes[2])),
                    path.string());
}

LdrImage load_ldr(const std::filesystem::path& path) {
    const ByteRaster raster = read_png(path);
    auto planes = deinterleave(raster.width, raster.height, raster.channels, raster.samples,
                               [](std::uint8_t v) { return v / 255.0; });
    return LdrImage(ImagePlane(raster.width, raster.height, std::move(planes[0])),
                    ImagePlane(raster.width, raster.height, std::move(planes[1])),
                    ImagePlane(raster.width, raster.height, std::move(planes[2])),
                    path.string());
}

ImagePlane log_compress(const ImagePlane& plane) {
    double min_positive = std::numeric_limits<double>::infinity();
    bool has_zero = false;
    for (double v : plane.samples()) {
        if (v > 0.0) {
            min_positive = std::min(min_positive, v);
        } else {
            has_zero = true;
        }
    }
    if (!std::isfinite(min_positive)) {
        throw AllZeroPlane("plane has no positive sample");
    }
    const double eps = has_zero ? min_positive : 0.0;
    std::vector<double> out(plane.pixel_count());
    auto src = plane.samples();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::log(src[i] + eps);
    }
    return ImagePlane(plane.width(), plane.height(), std::move(out));
}

HdrImage log_compress(const HdrImage& img) {
    return HdrImage(log_compress(img.r()), log_compress(img.g()), log_compress(img.b()),
                    img.source_path(), RadianceDomain::LogCompressed);
}

const ImagePlane& extract_channel(const HdrImage& img, ChannelId c) {
    return img.plane(c);
}

const ImagePlane& extract_channel(const LdrImage& img, ChannelId c) {
    return img.plane(c);
}

namespace {

FloatRaster to_raster(const HdrImage& img) {
    FloatRaster raster;
    raster.width = img.width();
    raster.height = img.height();
    raster.channels = 3;
    const std::size_t n = static_cast<std::size_t>(raster.width) * raster.height;
    raster.samples.resize(n * 3);
    for (std::size_t i = 0; i < n; ++i) {
        raster.samples[3 * i] = static_cast<float>(img.r().samples()[i]);
        raster.samples[3 * i + 1] = static_cast<float>(img.g().samples()[i]);
        raster.samples[3 * i + 2] = static_cast<float>(img.b().samples()[i]);
    }
    return raster;
}

} // namespace

void save_hdr_pfm(const std::filesystem::path& path, const HdrImage& img) {
    write_pfm(path, to_raster(img));
}

void save_hdr_rgbe(const std::filesystem::path& path, const HdrImage& img) {
    write_rgbe(path, to_raster(img));
}

void save_ldr_png(const std::filesystem::path& path, const LdrImage& img) {
    ByteRaster raster;
    raster.width = img.width();
    raster.height = img.height();
    raster.channels = 3;
    const std::size_t n = static_cast<std::size_t>(raster.width) * raster.height;
    raster.samples.resize(n * 3);
    auto quantize = [](double v) {
        return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    };
    for (std::size_t i = 0; i < n; ++i) {
        raster.samples[3 * i] = quantize(img.r().samples()[i]);
        raster.samples[3 * i + 1] = quantize(img.g().samples()[i]);
        raster.samples[3 * i + 2] = quantize(img.b().samples()[i]);
    }
    write_png(path, raster);
}

void save_plane_pfm(const std::filesystem::path& path, const ImagePlane& plane) {
    FloatRaster raster;
    raster.width = plane.width();
    raster.height = plane.height();
    raster.channels = 1;
    raster.samples.assign(plane.samples().begin(), plane.samples().end());
    write_pfm(path, raster);
}

} // namespace fsitm
