#include "fsitm/fixtures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <random>
#include <vector>

namespace fsitm {

std::string_view to_string(SceneKind k) {
    switch (k) {
    case SceneKind::GaussianBump: return "gaussian_bump";
    case SceneKind::StepEdge: return "step_edge";
    case SceneKind::BrightLine: return "bright_line";
    case SceneKind::DarkLine: return "dark_line";
    case SceneKind::MixedGrid: return "mixed_grid";
    }
    throw InvalidArgument("unknown scene kind");
}

SceneKind parse_scene_kind(std::string_view s) {
    if (s == "gaussian_bump") return SceneKind::GaussianBump;
    if (s == "step_edge") return SceneKind::StepEdge;
    if (s == "bright_line") return SceneKind::BrightLine;
    if (s == "dark_line") return SceneKind::DarkLine;
    if (s == "mixed_grid") return SceneKind::MixedGrid;
    throw InvalidArgument(fmt::format("unknown scene kind '{}'", s));
}

void SyntheticScene::validate() const {
    if (width < ImagePlane::kMinDimension || height < ImagePlane::kMinDimension) {
        throw InvalidArgument(fmt::format("scene dimensions {}x{} below the {} minimum", width,
                                          height, ImagePlane::kMinDimension));
    }
    if (!(dynamic_range >= 1.0) || !std::isfinite(dynamic_range)) {
        throw InvalidArgument(fmt::format("dynamic range {} must be at least 1", dynamic_range));
    }
}

namespace {

// Uniform [0, 1) double from the standard-specified mt19937 stream; mapped
// by hand so the sequence is identical on every platform.
double next_uniform(std::mt19937& rng) {
    return rng() * (1.0 / 4294967296.0);
}

void add_noise(std::vector<double>& raw, std::uint32_t seed, double amplitude) {
    std::mt19937 rng(seed);
    for (double& v : raw) {
        v += amplitude * (next_uniform(rng) - 0.5);
    }
}

std::vector<double> raw_gaussian_bump(int w, int h) {
    std::vector<double> raw(static_cast<std::size_t>(w) * h);
    const double cx = (w - 1) / 2.0;
    const double cy = (h - 1) / 2.0;
    const double sx = w / 6.0;
    const double sy = h / 6.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double dx = (x - cx) / sx;
            const double dy = (y - cy) / sy;
            raw[static_cast<std::size_t>(y) * w + x] = std::exp(-0.5 * (dx * dx + dy * dy));
        }
    }
    return raw;
}

std::vector<double> raw_step_edge(int w, int h) {
    std::vector<double> raw(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            raw[static_cast<std::size_t>(y) * w + x] = x < w / 2 ? 0.0 : 1.0;
        }
    }
    return raw;
}

std::vector<double> raw_line(int w, int h, bool bright) {
    std::vector<double> raw(static_cast<std::size_t>(w) * h, bright ? 0.0 : 1.0);
    const int column = w / 2;
    for (int y = 0; y < h; ++y) {
        raw[static_cast<std::size_t>(y) * w + column] = bright ? 1.0 : 0.0;
    }
    return raw;
}

// Quadrants: bump | vertical step // bright horizontal line | dark vertical
// line, plus full-frame noise. One scene exercising every feature class.
std::vector<double> raw_mixed_grid(int w, int h, std::uint32_t seed) {
    std::vector<double> raw(static_cast<std::size_t>(w) * h, 0.5);
    const int hw = w / 2;
    const int hh = h / 2;
    auto cell = [&](int x0, int y0, int cw, int ch, auto f) {
        for (int y = 0; y < ch; ++y) {
            for (int x = 0; x < cw; ++x) {
                raw[static_cast<std::size_t>(y0 + y) * w + (x0 + x)] = f(x, y, cw, ch);
            }
        }
    };
    cell(0, 0, hw, hh, [](int x, int y, int cw, int ch) {
        const double dx = (x - (cw - 1) / 2.0) / (cw / 5.0);
        const double dy = (y - (ch - 1) / 2.0) / (ch / 5.0);
        return std::exp(-0.5 * (dx * dx + dy * dy));
    });
    cell(hw, 0, w - hw, hh,
         [](int x, int, int cw, int) { return x < cw / 2 ? 0.15 : 0.85; });
    cell(0, hh, hw, h - hh,
         [](int, int y, int, int ch) { return y == ch / 2 ? 0.95 : 0.2; });
    cell(hw, hh, w - hw, h - hh,
         [](int x, int, int cw, int) { return x == cw / 2 ? 0.05 : 0.8; });
    add_noise(raw, seed, 0.08);
    return raw;
}

// Affine map onto exactly [1, dynamic_range].
void normalize_range(std::vector<double>& raw, double dynamic_range) {
    const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (hi <= lo) {
        std::ranges::fill(raw, 1.0);
        return;
    }
    for (double& v : raw) {
        v = 1.0 + (dynamic_range - 1.0) * ((v - lo) / (hi - lo));
    }
}

} // namespace

HdrImage render_scene(const SyntheticScene& s) {
    s.validate();
    std::vector<double> raw;
    switch (s.kind) {
    case SceneKind::GaussianBump:
        raw = raw_gaussian_bump(s.width, s.height);
        add_noise(raw, s.seed, 0.08);
        break;
    case SceneKind::StepEdge:
        raw = raw_step_edge(s.width, s.height);
        break;
    case SceneKind::BrightLine:
        raw = raw_line(s.width, s.height, true);
        break;
    case SceneKind::DarkLine:
        raw = raw_line(s.width, s.height, false);
        break;
    case SceneKind::MixedGrid:
        raw = raw_mixed_grid(s.width, s.height, s.seed);
        break;
    }
    normalize_range(raw, s.dynamic_range);
    ImagePlane plane(s.width, s.height, std::move(raw));
    ImagePlane g = plane;
    ImagePlane b = plane;
    return HdrImage(std::move(plane), std::move(g), std::move(b),
                    fmt::format("synthetic:{}", to_string(s.kind)));
}

std::string_view to_string(TmoKind k) {
    switch (k) {
    case TmoKind::Clip: return "clip";
    case TmoKind::Gamma: return "gamma";
    case TmoKind::LogNorm: return "log_norm";
    case TmoKind::ReinhardGlobal: return "reinhard_global";
    }
    throw InvalidArgument("unknown tone-map operator");
}

void ToneMapOp::validate() const {
    if (kind == TmoKind::Gamma && !(gamma > 0.0) ) {
        throw InvalidArgument(fmt::format("gamma {} must be positive", gamma));
    }
}

ToneMapOp parse_tone_map_op(std::string_view s) {
    ToneMapOp op;
    std::string_view name = s;
    if (const auto colon = s.find(':'); colon != std::string_view::npos) {
        name = s.substr(0, colon);
        const std::string_view arg = s.substr(colon + 1);
        const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), op.gamma);
        if (ec != std::errc{} || ptr != arg.data() + arg.size()) {
            throw InvalidArgument(fmt::format("bad tone-map parameter '{}'", arg));
        }
    }
    if (name == "clip") {
        op.kind = TmoKind::Clip;
    } else if (name == "gamma") {
        op.kind = TmoKind::Gamma;
    } else if (name == "log_norm") {
        op.kind = TmoKind::LogNorm;
    } else if (name == "reinhard_global") {
        op.kind = TmoKind::ReinhardGlobal;
    } else {
        throw InvalidArgument(fmt::format("unknown tone-map operator '{}'", name));
    }
    op.validate();
    return op;
}

namespace {

ImagePlane map_plane(const ImagePlane& p, const ToneMapOp& op, double gmax) {
    std::vector<double> out(p.pixel_count());
    auto src = p.samples();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = src[i];
        double y = 0.0;
        if (gmax > 0.0) {
            switch (op.kind) {
            case TmoKind::Clip: y = x / gmax; break;
            case TmoKind::Gamma: y = std::pow(x / gmax, 1.0 / op.gamma); break;
            case TmoKind::LogNorm: y = std::log1p(x) / std::log1p(gmax); break;
            case TmoKind::ReinhardGlobal: y = (x / (1.0 + x)) / (gmax / (1.0 + gmax)); break;
            }
        }
        out[i] = std::clamp(y, 0.0, 1.0);
    }
    return ImagePlane(p.width(), p.height(), std::move(out));
}

} // namespace

LdrImage tone_map(const HdrImage& h, const ToneMapOp& op) {
    op.validate();
    if (h.domain() != RadianceDomain::Linear) {
        throw InvalidArgument("tone mapping expects linear radiance");
    }
    const double gmax =
        std::max({max_sample(h.r()), max_sample(h.g()), max_sample(h.b())});
    return LdrImage(map_plane(h.r(), op, gmax), map_plane(h.g(), op, gmax),
                    map_plane(h.b(), op, gmax), h.source_path());
}

namespace {

ImagePlane posterize_plane(const ImagePlane& p, int codes) {
    std::vector<double> out(p.pixel_count());
    auto src = p.samples();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double bin =
            std::min(std::floor(src[i] * codes), static_cast<double>(codes - 1));
        out[i] = (bin + 0.5) / codes;
    }
    return ImagePlane(p.width(), p.height(), std::move(out));
}

} // namespace

LdrImage degrade(const LdrImage& l, int level) {
    if (level < 0) {
        throw InvalidArgument(fmt::format("degradation level {} is negative", level));
    }
    if (level == 0) {
        return l;
    }
    if (level > 7) {
        throw LevelTooHigh(
            fmt::format("level {} leaves fewer than 2 of 256 codes", level));
    }
    const int codes = 256 >> level;
    return LdrImage(posterize_plane(l.r(), codes), posterize_plane(l.g(), codes),
                    posterize_plane(l.b(), codes), l.source_path());
}

} // namespace fsitm
