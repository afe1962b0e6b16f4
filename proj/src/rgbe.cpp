#include "fsitm/rgbe.hpp"

#include <cmath>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <string>
#include <vector>

namespace fsitm {

std::array<float, 3> rgbe_decode(std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t e) {
    if (e == 0) {
        return {0.0f, 0.0f, 0.0f};
    }
    const float scale = std::ldexp(1.0f, static_cast<int>(e) - (128 + 8));
    return {(r + 0.5f) * scale, (g + 0.5f) * scale, (b + 0.5f) * scale};
}

std::array<std::uint8_t, 4> rgbe_encode(float r, float g, float b) {
    const float max = std::max({r, g, b});
    if (max < 1e-32f) {
        return {0, 0, 0, 0};
    }
    int exponent;
    std::frexp(max, &exponent);
    // Mantissa of the dominant channel lands in [128, 255].
    const float scale = std::ldexp(1.0f, 8 - exponent);
    auto mantissa = [scale](float v) {
        const float m = std::floor(v * scale);
        return static_cast<std::uint8_t>(std::min(m, 255.0f));
    };
    return {mantissa(r), mantissa(g), mantissa(b), static_cast<std::uint8_t>(exponent + 128)};
}

namespace {

std::string read_line(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw TruncatedPayload("unexpected end of RGBE header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

void read_exact(std::istream& in, std::uint8_t* dst, std::size_t n, const std::string& path) {
    in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
        throw TruncatedPayload(fmt::format("'{}' ends inside pixel data", path));
    }
}

void decode_pixels(const std::uint8_t* rgbe, std::size_t count, float* out) {
    for (std::size_t i = 0; i < count; ++i) {
        const auto px = rgbe_decode(rgbe[4 * i], rgbe[4 * i + 1], rgbe[4 * i + 2], rgbe[4 * i + 3]);
        out[3 * i] = px[0];
        out[3 * i + 1] = px[1];
        out[3 * i + 2] = px[2];
    }
}

// Reads the rest of the image as flat (uncompressed) RGBE pixels, with
// `lead` pixels' worth of already-consumed bytes prepended.
void read_flat(std::istream& in, const std::string& path, std::vector<std::uint8_t> lead,
               std::size_t pixels, float* out) {
    const std::size_t need = pixels * 4;
    lead.resize(need);
    if (need > 4) {
        read_exact(in, lead.data() + 4, need - 4, path);
    }
    decode_pixels(lead.data(), pixels, out);
}

} // namespace

FloatRaster read_rgbe(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    }

    std::string line = read_line(in);
    if (line.size() < 2 || line[0] != '#' || line[1] != '?') {
        throw MalformedHeader(fmt::format("'{}' lacks the #? Radiance magic", path.string()));
    }
    // Header variables until the blank line. FORMAT, if present, must be RGBE.
    for (;;) {
        line = read_line(in);
        if (line.empty()) {
            break;
        }
        if (line.rfind("FORMAT=", 0) == 0 && line != "FORMAT=32-bit_rle_rgbe") {
            throw UnsupportedFormat(fmt::format("'{}': unsupported {}", path.string(), line));
        }
    }

    line = read_line(in);
    int width = 0, height = 0;
    if (std::sscanf(line.c_str(), "-Y %d +X %d", &height, &width) != 2) {
        if (line.find('X') != std::string::npos || line.find('Y') != std::string::npos) {
            throw UnsupportedFormat(
                fmt::format("'{}': unsupported orientation '{}'", path.string(), line));
        }
        throw MalformedHeader(fmt::format("'{}': missing resolution line", path.string()));
    }
    if (width <= 0 || height <= 0) {
        throw MalformedHeader(fmt::format("'{}': bad resolution {}x{}", path.string(), width, height));
    }

    FloatRaster raster;
    raster.width = width;
    raster.height = height;
    raster.channels = 3;
    raster.samples.resize(static_cast<std::size_t>(width) * height * 3);

    std::vector<std::uint8_t> scanline(static_cast<std::size_t>(width) * 4);
    for (int y = 0; y < height; ++y) {
        float* out = raster.samples.data() + static_cast<std::size_t>(y) * width * 3;

        std::uint8_t marker[4];
        read_exact(in, marker, 4, path.string());
        const bool rle = marker[0] == 2 && marker[1] == 2 && (marker[2] & 0x80) == 0;
        if (!rle) {
            // Flat file: the marker is the first pixel of the remainder.
            read_flat(in, path.string(), {marker[0], marker[1], marker[2], marker[3]},
                      static_cast<std::size_t>(width) * (height - y), out);
            return raster;
        }
        if (((marker[2] << 8) | marker[3]) != width) {
            throw MalformedHeader(fmt::format("'{}': RLE scanline width mismatch", path.string()));
        }

        // Four channel streams per scanline: r, g, b, e.
        for (int ch = 0; ch < 4; ++ch) {
            std::size_t pos = 0;
            while (pos < static_cast<std::size_t>(width)) {
                std::uint8_t code[2];
                read_exact(in, code, 2, path.string());
                if (code[0] > 128) {
                    std::size_t run = code[0] - 128;
                    if (run > static_cast<std::size_t>(width) - pos) {
                        throw MalformedHeader(
                            fmt::format("'{}': RLE run overflows scanline", path.string()));
                    }
                    while (run-- > 0) {
                        scanline[(pos++) * 4 + ch] = code[1];
                    }
                } else {
                    std::size_t count = code[0];
                    if (count == 0 || count > static_cast<std::size_t>(width) - pos) {
                        throw MalformedHeader(
                            fmt::format("'{}': bad RLE literal count", path.string()));
                    }
                    scanline[(pos++) * 4 + ch] = code[1];
                    for (std::size_t i = 1; i < count; ++i) {
                        std::uint8_t byte;
                        read_exact(in, &byte, 1, path.string());
                        scanline[(pos++) * 4 + ch] = byte;
                    }
                }
            }
        }
        decode_pixels(scanline.data(), width, out);
    }
    return raster;
}

namespace {

void write_rle_channel(std::ostream& out, const std::uint8_t* data, int count) {
    constexpr int kMinRun = 4;
    int cur = 0;
    while (cur < count) {
        // Locate the next run of at least kMinRun identical bytes; short runs
        // are folded into the preceding literal block.
        int run_start = cur;
        int run_len = 0;
        while (run_start < count) {
            run_len = 1;
            while (run_start + run_len < count && run_len < 127 &&
                   data[run_start] == data[run_start + run_len]) {
                ++run_len;
            }
            if (run_len >= kMinRun) {
                break;
            }
            run_start += run_len;
            run_len = 0;
        }
        // Literal bytes up to the run (or to the end when no run was found).
        while (cur < run_start) {
            const int literal = std::min(run_start - cur, 128);
            out.put(static_cast<char>(static_cast<std::uint8_t>(literal)));
            out.write(reinterpret_cast<const char*>(data + cur), literal);
            cur += literal;
        }
        if (run_len >= kMinRun) {
            out.put(static_cast<char>(static_cast<std::uint8_t>(128 + run_len)));
            out.put(static_cast<char>(data[run_start]));
            cur = run_start + run_len;
        }
    }
}

} // namespace

void write_rgbe(const std::filesystem::path& path, const FloatRaster& raster) {
    if (raster.channels != 3) {
        throw InvalidArgument("RGBE rasters must have 3 channels");
    }
    if (raster.width <= 0 || raster.height <= 0 ||
        raster.samples.size() != static_cast<std::size_t>(raster.width) * raster.height * 3) {
        throw InvalidArgument("inconsistent raster dimensions");
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError(fmt::format("cannot create '{}'", path.string()));
    }
    out << "#?RADIANCE\n"
        << "FORMAT=32-bit_rle_rgbe\n\n"
        << "-Y " << raster.height << " +X " << raster.width << "\n";

    const int w = raster.width;
    const bool use_rle = w >= 8 && w <= 0x7fff;
    std::vector<std::uint8_t> channel_bytes(static_cast<std::size_t>(w) * 4);
    for (int y = 0; y < raster.height; ++y) {
        const float* row = raster.samples.data() + static_cast<std::size_t>(y) * w * 3;
        if (!use_rle) {
            for (int x = 0; x < w; ++x) {
                const auto px = rgbe_encode(row[3 * x], row[3 * x + 1], row[3 * x + 2]);
                out.write(reinterpret_cast<const char*>(px.data()), 4);
            }
            continue;
        }
        for (int x = 0; x < w; ++x) {
            const auto px = rgbe_encode(row[3 * x], row[3 * x + 1], row[3 * x + 2]);
            for (int ch = 0; ch < 4; ++ch) {
                channel_bytes[static_cast<std::size_t>(ch) * w + x] = px[ch];
            }
        }
        const std::uint8_t marker[4] = {2, 2, static_cast<std::uint8_t>(w >> 8),
                                        static_cast<std::uint8_t>(w & 0xff)};
        out.write(reinterpret_cast<const char*>(marker), 4);
        for (int ch = 0; ch < 4; ++ch) {
            write_rle_channel(out, channel_bytes.data() + static_cast<std::size_t>(ch) * w, w);
        }
    }
    if (!out) {
        throw IoError(fmt::format("failed writing '{}'", path.string()));
    }
}

} // namespace fsitm
