#pragma once

#include <cstdint>
#include <string_view>

#include "fsitm/image.hpp"

namespace fsitm {

/// Synthetic scene archetypes, one per local feature class plus a composite.
enum class SceneKind { GaussianBump, StepEdge, BrightLine, DarkLine, MixedGrid };

std::string_view to_string(SceneKind k);

/// Parses "gaussian_bump", "step_edge", "bright_line", "dark_line",
/// "mixed_grid". Throws InvalidArgument otherwise.
SceneKind parse_scene_kind(std::string_view s);

/// Recipe for a deterministic synthetic HDR scene. Radiance spans exactly
/// [1, dynamic_range] after normalization.
struct SyntheticScene {
    SceneKind kind = SceneKind::GaussianBump;
    int width = 64;
    int height = 64;
    double dynamic_range = 1000.0;
    std::uint32_t seed = 1;

    void validate() const;
};

/// Renders the scene to a gray (three identical planes) HDR image. Given the
/// same fields the output is identical, on every platform.
HdrImage render_scene(const SyntheticScene& s);

enum class TmoKind { Clip, Gamma, LogNorm, ReinhardGlobal };

std::string_view to_string(TmoKind k);

/// Global tone-mapping operator selector. `gamma` applies to Gamma only.
struct ToneMapOp {
    TmoKind kind = TmoKind::Gamma;
    double gamma = 2.2;

    void validate() const;
};

/// Parses "clip", "gamma", "gamma:2.4", "log_norm", "reinhard_global".
ToneMapOp parse_tone_map_op(std::string_view s);

/// Maps linear radiance to display range [0, 1] using the image's global
/// maximum across all three channels:
///   clip            x / max
///   gamma           (x / max)^(1/gamma)
///   log_norm        ln(1 + x) / ln(1 + max)
///   reinhard_global (x / (1 + x)) / (max / (1 + max))
/// An all-black image maps to all-black.
LdrImage tone_map(const HdrImage& h, const ToneMapOp& op);

/// Posterizes to 256 / 2^level gray codes per channel. Level 0 returns the
/// input bit-identical; coarsening composes exactly (degrading at level a
/// and then at a coarser level b >= a is bit-identical to degrading at b
/// directly). Throws LevelTooHigh above 7, which would leave fewer than
/// 2 codes.
LdrImage degrade(const LdrImage& l, int level);

} // namespace fsitm
