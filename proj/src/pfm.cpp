#include "fsitm/pfm.hpp"

#include <bit>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <string>

namespace fsitm {

namespace {

// Reads one whitespace-delimited header token. PFM headers are ASCII tokens
// separated by single whitespace characters (conventionally newlines).
std::string next_token(std::istream& in) {
    std::string tok;
    char c;
    while (in.get(c)) {
        if (c == ' ' || c == '\n' || c == '\r' || c == '\t') {
            if (!tok.empty()) {
                break;
            }
        } else {
            tok += c;
        }
    }
    return tok;
}

float swap_float(float v) {
    std::uint32_t u;
    std::memcpy(&u, &v, sizeof(u));
    u = __builtin_bswap32(u);
    std::memcpy(&v, &u, sizeof(v));
    return v;
}

constexpr bool host_little_endian = (std::endian::native == std::endian::little);

} // namespace

FloatRaster read_pfm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    }

    const std::string magic = next_token(in);
    int channels;
    if (magic == "PF") {
        channels = 3;
    } else if (magic == "Pf") {
        channels = 1;
    } else {
        throw MalformedHeader(fmt::format("'{}' is not a PFM file", path.string()));
    }

    int width = 0, height = 0;
    double scale = 0.0;
    try {
        width = std::stoi(next_token(in));
        height = std::stoi(next_token(in));
        scale = std::stod(next_token(in));
    } catch (const std::exception&) {
        throw MalformedHeader(fmt::format("bad PFM dimensions/scale in '{}'", path.string()));
    }
    if (width <= 0 || height <= 0 || scale == 0.0) {
        throw MalformedHeader(fmt::format("bad PFM dimensions/scale in '{}'", path.string()));
    }

    const bool file_little_endian = scale < 0.0;
    FloatRaster raster;
    raster.width = width;
    raster.height = height;
    raster.channels = channels;
    raster.samples.resize(static_cast<std::size_t>(width) * height * channels);

    // Rows are stored bottom-up; read each file row into its top-down slot.
    const std::size_t row_floats = static_cast<std::size_t>(width) * channels;
    std::vector<float> row(row_floats);
    for (int file_row = 0; file_row < height; ++file_row) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row_floats * sizeof(float)));
        if (static_cast<std::size_t>(in.gcount()) != row_floats * sizeof(float)) {
            throw TruncatedPayload(fmt::format("'{}' ends before {}x{} payload", path.string(),
                                               width, height));
        }
        if (file_little_endian != host_little_endian) {
            for (float& v : row) {
                v = swap_float(v);
            }
        }
        const int out_row = height - 1 - file_row;
        std::memcpy(raster.samples.data() + static_cast<std::size_t>(out_row) * row_floats,
                    row.data(), row_floats * sizeof(float));
    }
    return raster;
}

void write_pfm(const std::filesystem::path& path, const FloatRaster& raster) {
    if (raster.channels != 1 && raster.channels != 3) {
        throw InvalidArgument("PFM rasters must have 1 or 3 channels");
    }
    if (raster.width <= 0 || raster.height <= 0 ||
        raster.samples.size() !=
            static_cast<std::size_t>(raster.width) * raster.height * raster.channels) {
        throw InvalidArgument("inconsistent raster dimensions");
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError(fmt::format("cannot create '{}'", path.string()));
    }
    out << (raster.channels == 3 ? "PF" : "Pf") << "\n"
        << raster.width << " " << raster.height << "\n"
        << "-1.0\n";

    const std::size_t row_floats = static_cast<std::size_t>(raster.width) * raster.channels;
    std::vector<float> row(row_floats);
    for (int file_row = 0; file_row < raster.height; ++file_row) {
        const int src_row = raster.height - 1 - file_row;
        std::memcpy(row.data(),
                    raster.samples.data() + static_cast<std::size_t>(src_row) * row_floats,
                    row_floats * sizeof(float));
        if (!host_little_endian) {
            for (float& v : row) {
                v = swap_float(v);
            }
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row_floats * sizeof(float)));
    }
    if (!out) {
        throw IoError(fmt::format("failed writing '{}'", path.string()));
    }
}

} // namespace fsitm
