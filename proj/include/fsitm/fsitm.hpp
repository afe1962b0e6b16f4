#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsitm/image.hpp"
#include "fsitm/loggabor.hpp"

namespace fsitm {

/// Per-pixel phase feature classes: true where the local phase is positive.
class BinaryFeatureMap {
public:
    BinaryFeatureMap(int width, int height, std::vector<bool> bits);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return bits_.size(); }

    bool bit(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x]; }
    const std::vector<bool>& bits() const { return bits_; }

    bool operator==(const BinaryFeatureMap&) const = default;

private:
    int width_;
    int height_;
    std::vector<bool> bits_;
};

/// Scoring configuration. The two filter banks target the very different
/// spectral content of raw radiance (long wavelengths) and log-compressed /
/// display-referred images (short wavelengths).
struct FsitmConfig {
    double alpha = 0.5; // blend weight of the raw-radiance term, in [0, 1]
    FilterParams hdr_params{.nscale = 2, .min_wavelength = 8.0, .mult = 8.0};
    FilterParams log_params{.nscale = 2, .min_wavelength = 2.0, .mult = 2.0};

    void validate() const;

    bool operator==(const FsitmConfig&) const = default;
};

/// One scored HDR/LDR pairing, optionally combined with an external TMQI
/// score. `combined` is present exactly when `tmqi` is.
struct ScoreRecord {
    std::string hdr_id;
    std::string ldr_id;
    ChannelId channel = ChannelId::G;
    double fsitm = 0.0;
    std::optional<double> tmqi;
    std::optional<double> combined;
};

/// Thresholds a phase map at zero: bit(x) = ph(x) > 0. Exactly-zero phase
/// lands in the false class.
BinaryFeatureMap binarize(const PhaseMap& ph);

/// Fraction of pixels whose feature bits agree (including joint-false
/// agreement). 1 when identical, 0 when complementary.
double feature_similarity(const BinaryFeatureMap& p1, const BinaryFeatureMap& p2);

/// Phase-similarity score of a tone-mapped image against its HDR source,
/// for one channel:
///
///   alpha * F(P_H, P_L) + (1 - alpha) * F(P_LogH, P_L)
///
/// where P_* are binarized mean-phase maps of the raw radiance H, its
/// log-compressed form LogH, and the LDR L. ph(L) is computed once with
/// log_params and reused in both terms.
double fsitm(const HdrImage& h, const LdrImage& l, ChannelId c, const FsitmConfig& cfg = {});

/// Mean of a phase-similarity score and an externally computed TMQI score.
/// Both inputs must lie in [0, 1].
double combine_with_tmqi(double fsitm_score, double tmqi_score);

ScoreRecord make_score_record(std::string hdr_id, std::string ldr_id, ChannelId c,
                              double fsitm_score, std::optional<double> tmqi = std::nullopt);

} // namespace fsitm
