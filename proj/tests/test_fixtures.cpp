#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fsitm/fixtures.hpp"
#include "fsitm/fsitm.hpp"
#include "fsitm/image_io.hpp"
#include "fsitm/loggabor.hpp"

using namespace fsitm;

namespace {

bool planes_identical(const ImagePlane& a, const ImagePlane& b) {
    if (!a.same_size(b)) return false;
    for (std::size_t i = 0; i < a.pixel_count(); ++i) {
        if (a.samples()[i] != b.samples()[i]) return false;
    }
    return true;
}

bool images_identical(const LdrImage& a, const LdrImage& b) {
    return planes_identical(a.r(), b.r()) && planes_identical(a.g(), b.g()) &&
           planes_identical(a.b(), b.b());
}

} // namespace

TEST_CASE("scene kinds round-trip through their names") {
    for (const SceneKind k : {SceneKind::GaussianBump, SceneKind::StepEdge, SceneKind::BrightLine,
                              SceneKind::DarkLine, SceneKind::MixedGrid}) {
        CHECK(parse_scene_kind(to_string(k)) == k);
    }
    CHECK_THROWS_AS(parse_scene_kind("bumpy"), InvalidArgument);
}

TEST_CASE("step edge renders exact halves at 1 and the dynamic range") {
    const SyntheticScene s{.kind = SceneKind::StepEdge, .width = 32, .height = 16,
                           .dynamic_range = 1000.0};
    const HdrImage img = render_scene(s);
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 32; ++x) {
            CHECK(img.g().at(x, y) == (x < 16 ? 1.0 : 1000.0));
        }
    }
    // Gray scene: all three planes identical.
    CHECK(planes_identical(img.r(), img.g()));
    CHECK(planes_identical(img.g(), img.b()));
}

TEST_CASE("rendered radiance spans exactly [1, dynamic_range]") {
    for (const SceneKind k : {SceneKind::GaussianBump, SceneKind::StepEdge, SceneKind::BrightLine,
                              SceneKind::DarkLine, SceneKind::MixedGrid}) {
        for (const double dr : {1.0, 50.0, 1000.0}) {
            const SyntheticScene s{.kind = k, .width = 24, .height = 24, .dynamic_range = dr,
                                   .seed = 5};
            const HdrImage img = render_scene(s);
            CHECK(min_sample(img.g()) == 1.0);
            CHECK(max_sample(img.g()) == (dr == 1.0 ? 1.0 : dr));
        }
    }
}

TEST_CASE("rendering is deterministic in the seed") {
    const SyntheticScene a{.kind = SceneKind::GaussianBump, .width = 24, .height = 24, .seed = 7};
    SyntheticScene b = a;
    CHECK(planes_identical(render_scene(a).g(), render_scene(b).g()));
    b.seed = 8;
    CHECK_FALSE(planes_identical(render_scene(a).g(), render_scene(b).g()));
    // Clean archetypes carry no noise, so the seed cannot matter.
    const SyntheticScene line{.kind = SceneKind::BrightLine, .width = 24, .height = 24, .seed = 7};
    SyntheticScene line2 = line;
    line2.seed = 99;
    CHECK(planes_identical(render_scene(line).g(), render_scene(line2).g()));
}

TEST_CASE("line scenes put the mean phase in the documented classes") {
    const FilterParams p{.nscale = 2, .min_wavelength = 2.0, .mult = 2.0};
    const SyntheticScene bright{.kind = SceneKind::BrightLine, .width = 32, .height = 32};
    const SyntheticScene dark{.kind = SceneKind::DarkLine, .width = 32, .height = 32};
    // Vertical lines at the center column.
    CHECK(lwmpa(render_scene(bright).g(), p).values.at(16, 16) > 1.0);
    CHECK(lwmpa(render_scene(dark).g(), p).values.at(16, 16) < -1.0);
}

TEST_CASE("scene validation rejects tiny images and sub-unit dynamic range") {
    SyntheticScene s;
    s.width = 4;
    CHECK_THROWS_AS(render_scene(s), InvalidArgument);
    s = {};
    s.dynamic_range = 0.5;
    CHECK_THROWS_AS(render_scene(s), InvalidArgument);
}

TEST_CASE("tone-map operator parsing") {
    CHECK(parse_tone_map_op("clip").kind == TmoKind::Clip);
    CHECK(parse_tone_map_op("log_norm").kind == TmoKind::LogNorm);
    CHECK(parse_tone_map_op("reinhard_global").kind == TmoKind::ReinhardGlobal);
    const ToneMapOp g = parse_tone_map_op("gamma");
    CHECK(g.kind == TmoKind::Gamma);
    CHECK(g.gamma == 2.2);
    CHECK(parse_tone_map_op("gamma:2.4").gamma == 2.4);
    CHECK_THROWS_AS(parse_tone_map_op("hable"), InvalidArgument);
    CHECK_THROWS_AS(parse_tone_map_op("gamma:zero"), InvalidArgument);
    CHECK_THROWS_AS(parse_tone_map_op("gamma:-1"), InvalidArgument);
}

TEST_CASE("clip on a unit-range image is the identity") {
    std::vector<double> v(64);
    for (int i = 0; i < 64; ++i) v[i] = i / 63.0; // max is exactly 1
    const ImagePlane p(8, 8, v);
    const HdrImage h(p, p, p);
    const LdrImage l = tone_map(h, ToneMapOp{.kind = TmoKind::Clip});
    CHECK(planes_identical(l.g(), p));
}

TEST_CASE("gamma 1 equals clip") {
    const SyntheticScene s{.kind = SceneKind::MixedGrid, .width = 24, .height = 24, .seed = 3};
    const HdrImage h = render_scene(s);
    const LdrImage clip = tone_map(h, ToneMapOp{.kind = TmoKind::Clip});
    const LdrImage g1 = tone_map(h, ToneMapOp{.kind = TmoKind::Gamma, .gamma = 1.0});
    for (std::size_t i = 0; i < clip.g().pixel_count(); ++i) {
        CHECK(g1.g().samples()[i] == doctest::Approx(clip.g().samples()[i]).epsilon(1e-12));
    }
}

TEST_CASE("log_norm maps {0, e-1} onto exactly {0, 1}") {
    std::vector<double> v(64, 0.0);
    for (int i = 32; i < 64; ++i) v[i] = std::numbers::e - 1.0;
    const ImagePlane p(8, 8, v);
    const HdrImage h(p, p, p);
    const LdrImage l = tone_map(h, ToneMapOp{.kind = TmoKind::LogNorm});
    CHECK(l.g().samples()[0] == 0.0);
    CHECK(l.g().samples()[63] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reinhard maps the maximum to 1 and preserves order") {
    const SyntheticScene s{.kind = SceneKind::GaussianBump, .width = 24, .height = 24, .seed = 9};
    const HdrImage h = render_scene(s);
    const LdrImage l = tone_map(h, ToneMapOp{.kind = TmoKind::ReinhardGlobal});
    CHECK(max_sample(l.g()) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < l.g().pixel_count(); ++i) {
        if (h.g().samples()[i - 1] < h.g().samples()[i]) {
            CHECK(l.g().samples()[i - 1] < l.g().samples()[i]);
        }
    }
}

TEST_CASE("every operator lands in [0,1] on every scene") {
    for (const SceneKind k : {SceneKind::GaussianBump, SceneKind::StepEdge, SceneKind::MixedGrid}) {
        const HdrImage h = render_scene(SyntheticScene{.kind = k, .width = 24, .height = 24});
        for (const TmoKind t :
             {TmoKind::Clip, TmoKind::Gamma, TmoKind::LogNorm, TmoKind::ReinhardGlobal}) {
            const LdrImage l = tone_map(h, ToneMapOp{.kind = t});
            for (const ImagePlane* plane : {&l.r(), &l.g(), &l.b()}) {
                CHECK(min_sample(*plane) >= 0.0);
                CHECK(max_sample(*plane) <= 1.0);
            }
        }
    }
}

TEST_CASE("an all-black image tone-maps to all-black") {
    const ImagePlane z = ImagePlane::filled(8, 8, 0.0);
    const HdrImage h(z, z, z);
    for (const TmoKind t :
         {TmoKind::Clip, TmoKind::Gamma, TmoKind::LogNorm, TmoKind::ReinhardGlobal}) {
        const LdrImage l = tone_map(h, ToneMapOp{.kind = t});
        CHECK(max_sample(l.g()) == 0.0);
    }
}

TEST_CASE("tone mapping refuses log-compressed input") {
    const SyntheticScene s{.kind = SceneKind::GaussianBump, .width = 24, .height = 24};
    const HdrImage logh = log_compress(render_scene(s));
    CHECK_THROWS_AS(tone_map(logh, ToneMapOp{}), InvalidArgument);
}

TEST_CASE("tone mapping normalizes by the global maximum across channels") {
    // G holds the image maximum; R must be scaled by it, not by R's own max.
    const ImagePlane r = ImagePlane::filled(8, 8, 2.0);
    const ImagePlane g = ImagePlane::filled(8, 8, 8.0);
    const HdrImage h(r, g, ImagePlane::filled(8, 8, 1.0));
    const LdrImage l = tone_map(h, ToneMapOp{.kind = TmoKind::Clip});
    CHECK(l.r().samples()[0] == 0.25);
    CHECK(l.g().samples()[0] == 1.0);
    CHECK(l.b().samples()[0] == 0.125);
}

TEST_CASE("degrade level 0 returns the input bit-identically") {
    const HdrImage h = render_scene(SyntheticScene{.kind = SceneKind::MixedGrid, .width = 24,
                                                   .height = 24, .seed = 2});
    const LdrImage l = tone_map(h, ToneMapOp{});
    CHECK(images_identical(degrade(l, 0), l));
}

TEST_CASE("degrade level 7 leaves exactly two code levels") {
    const HdrImage h = render_scene(SyntheticScene{.kind = SceneKind::GaussianBump, .width = 24,
                                                   .height = 24, .seed = 2});
    const LdrImage l = degrade(tone_map(h, ToneMapOp{}), 7);
    for (double v : l.g().samples()) {
        CHECK((v == 0.25 || v == 0.75));
    }
}

TEST_CASE("degrade rejects out-of-range levels") {
    const LdrImage l(ImagePlane::filled(8, 8, 0.5), ImagePlane::filled(8, 8, 0.5),
                     ImagePlane::filled(8, 8, 0.5));
    CHECK_THROWS_AS(degrade(l, -1), InvalidArgument);
    CHECK_THROWS_AS(degrade(l, 8), LevelTooHigh);
}

TEST_CASE("coarsening composes: degrade(degrade(l,a),b) == degrade(l,b) for a <= b") {
    const HdrImage h = render_scene(SyntheticScene{.kind = SceneKind::MixedGrid, .width = 24,
                                                   .height = 24, .seed = 11});
    const LdrImage l = tone_map(h, ToneMapOp{.kind = TmoKind::Gamma, .gamma = 2.2});
    for (int a = 0; a <= 7; ++a) {
        const LdrImage fine = degrade(l, a);
        for (int b = a; b <= 7; ++b) {
            CHECK(images_identical(degrade(fine, b), degrade(l, b)));
        }
    }
}

TEST_CASE("deeper degradation never adds gray codes") {
    const HdrImage h = render_scene(SyntheticScene{.kind = SceneKind::GaussianBump, .width = 24,
                                                   .height = 24, .seed = 13});
    const LdrImage l = tone_map(h, ToneMapOp{});
    std::size_t prev = 257;
    for (int level = 1; level <= 7; ++level) {
        const LdrImage d = degrade(l, level);
        std::vector<double> codes(d.g().samples().begin(), d.g().samples().end());
        std::sort(codes.begin(), codes.end());
        codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
        CHECK(codes.size() <= std::size_t{256} >> level);
        CHECK(codes.size() <= prev);
        prev = codes.size();
    }
}
