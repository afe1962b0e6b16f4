#include "fsitm/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <fmt/format.h>
#include <memory>

namespace fsitm {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) {
            std::fclose(f);
        }
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports errors via longjmp; no C++ objects with destructors may be
// live between setjmp and the png_* calls it guards.
[[noreturn]] void throw_after_longjmp(const std::string& path) {
    throw MalformedHeader(fmt::format("libpng failed decoding '{}'", path));
}

} // namespace

ByteRaster read_png(const std::filesystem::path& path) {
    FilePtr file(std::fopen(path.string().c_str(), "rb"));
    if (!file) {
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    }

    png_byte signature[8];
    if (std::fread(signature, 1, 8, file.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0) {
        throw MalformedHeader(fmt::format("'{}' is not a PNG file", path.string()));
    }

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error("libpng allocation failure");
    }

    // volatile: these survive libpng's longjmp with defined values
    volatile bool failed = false;
    volatile int v_width = 0, v_height = 0, v_channels = 0;
    volatile int v_bit_depth = 0, v_color_type = 0;
    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;

    if (setjmp(png_jmpbuf(png))) {
        failed = true;
    } else {
        png_init_io(png, file.get());
        png_set_sig_bytes(png, 8);
        png_read_info(png, info);

        const int width = static_cast<int>(png_get_image_width(png, info));
        const int height = static_cast<int>(png_get_image_height(png, info));
        const int bit_depth = png_get_bit_depth(png, info);
        const int color_type = png_get_color_type(png, info);
        v_width = width;
        v_height = height;
        v_bit_depth = bit_depth;
        v_color_type = color_type;

        if (bit_depth == 8 && color_type != PNG_COLOR_TYPE_PALETTE) {
            if (color_type & PNG_COLOR_MASK_ALPHA) {
                png_set_strip_alpha(png);
            }
            png_read_update_info(png, info);
            const int channels = static_cast<int>(png_get_channels(png, info));
            v_channels = channels;
            pixels.resize(static_cast<std::size_t>(width) * height * channels);
            rows.resize(height);
            for (int y = 0; y < height; ++y) {
                rows[y] = pixels.data() + static_cast<std::size_t>(y) * width * channels;
            }
            png_read_image(png, rows.data());
            png_read_end(png, nullptr);
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);

    const int width = v_width, height = v_height, channels = v_channels;
    const int bit_depth = v_bit_depth, color_type = v_color_type;
    if (failed) {
        throw_after_longjmp(path.string());
    }
    if (bit_depth != 8) {
        throw UnsupportedBitDepth(
            fmt::format("'{}' has bit depth {}, only 8 is supported", path.string(), bit_depth));
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        throw UnsupportedFormat(fmt::format("'{}' is palette-indexed", path.string()));
    }
    if (channels != 1 && channels != 3) {
        throw UnsupportedFormat(
            fmt::format("'{}' decoded to {} channels", path.string(), channels));
    }

    ByteRaster raster;
    raster.width = width;
    raster.height = height;
    raster.channels = channels;
    raster.samples = std::move(pixels);
    return raster;
}

void write_png(const std::filesystem::path& path, const ByteRaster& raster) {
    if (raster.channels != 1 && raster.channels != 3) {
        throw InvalidArgument("PNG rasters must have 1 or 3 channels");
    }
    if (raster.width <= 0 || raster.height <= 0 ||
        raster.samples.size() !=
            static_cast<std::size_t>(raster.width) * raster.height * raster.channels) {
        throw InvalidArgument("inconsistent raster dimensions");
    }

    FilePtr file(std::fopen(path.string().c_str(), "wb"));
    if (!file) {
        throw IoError(fmt::format("cannot create '{}'", path.string()));
    }

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw Error("libpng allocation failure");
    }

    volatile bool failed = false;
    std::vector<png_const_bytep> rows(raster.height);
    for (int y = 0; y < raster.height; ++y) {
        rows[y] =
            raster.samples.data() + static_cast<std::size_t>(y) * raster.width * raster.channels;
    }

    if (setjmp(png_jmpbuf(png))) {
        failed = true;
    } else {
        png_init_io(png, file.get());
        png_set_IHDR(png, info, static_cast<png_uint_32>(raster.width),
                     static_cast<png_uint_32>(raster.height), 8,
                     raster.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        png_write_rows(png, const_cast<png_bytepp>(rows.data()),
                       static_cast<png_uint_32>(raster.height));
        png_write_end(png, nullptr);
    }
    png_destroy_write_struct(&png, &info);

    if (failed) {
        throw IoError(fmt::format("libpng failed writing '{}'", path.string()));
    }
}

} // namespace fsitm
