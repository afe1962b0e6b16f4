#include "fsitm/fsitm.hpp"

#include <fmt/format.h>
#include <future>
#include <utility>

#include "fsitm/image_io.hpp"

namespace fsitm {

BinaryFeatureMap::BinaryFeatureMap(int width, int height, std::vector<bool> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
    if (width < 1 || height < 1) {
        throw InvalidImage(fmt::format("feature map dimensions {}x{}", width, height));
    }
    if (bits_.size() != static_cast<std::size_t>(width) * height) {
        throw InvalidImage(fmt::format("feature map holds {} bits, expected {}x{}", bits_.size(),
                                       width, height));
    }
}

void FsitmConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InvalidArgument(fmt::format("alpha {} outside [0, 1]", alpha));
    }
    hdr_params.validate();
    log_params.validate();
}

BinaryFeatureMap binarize(const PhaseMap& ph) {
    const auto& plane = ph.values;
    std::vector<bool> bits(plane.pixel_count());
    auto samples = plane.samples();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        bits[i] = samples[i] > 0.0;
    }
    return BinaryFeatureMap(plane.width(), plane.height(), std::move(bits));
}

double feature_similarity(const BinaryFeatureMap& p1, const BinaryFeatureMap& p2) {
    if (p1.width() != p2.width() || p1.height() != p2.height()) {
        throw DimensionMismatch(fmt::format("feature maps {}x{} vs {}x{}", p1.width(), p1.height(),
                                            p2.width(), p2.height()));
    }
    std::size_t agree = 0;
    const auto& a = p1.bits();
    const auto& b = p2.bits();
    for (std::size_t i = 0; i < a.size(); ++i) {
        agree += a[i] == b[i];
    }
    return static_cast<double>(agree) / static_cast<double>(a.size());
}

double fsitm(const HdrImage& h, const LdrImage& l, ChannelId c, const FsitmConfig& cfg) {
    cfg.validate();
    if (h.width() != l.width() || h.height() != l.height()) {
        throw DimensionMismatch(fmt::format("HDR {}x{} vs LDR {}x{}", h.width(), h.height(),
                                            l.width(), l.height()));
    }

    const ImagePlane& h_c = extract_channel(h, c);
    const ImagePlane log_h_c = log_compress(h_c);
    const ImagePlane& l_c = extract_channel(l, c);

    // One bank per parameter set; the log-domain bank serves both LogH and L.
    const LogGaborBank hdr_bank(cfg.hdr_params, h.width(), h.height());
    const LogGaborBank log_bank(cfg.log_params, h.width(), h.height());

    // The three mean-phase maps are independent; each lwmpa call builds its
    // own FFT plans and the banks are immutable, so the results are
    // identical however these interleave.
    auto ph_h = std::async(std::launch::async, [&] { return lwmpa(h_c, hdr_bank); });
    auto ph_log_h = std::async(std::launch::async, [&] { return lwmpa(log_h_c, log_bank); });
    PhaseMap ph_l = lwmpa(l_c, log_bank);

    const BinaryFeatureMap p_l = binarize(ph_l);
    const double f_h = feature_similarity(binarize(ph_h.get()), p_l);
    const double f_log_h = feature_similarity(binarize(ph_log_h.get()), p_l);
    return cfg.alpha * f_h + (1.0 - cfg.alpha) * f_log_h;
}

double combine_with_tmqi(double fsitm_score, double tmqi_score) {
    if (!(fsitm_score >= 0.0 && fsitm_score <= 1.0)) {
        throw OutOfRangeInput(fmt::format("similarity score {} outside [0, 1]", fsitm_score));
    }
    if (!(tmqi_score >= 0.0 && tmqi_score <= 1.0)) {
        throw OutOfRangeInput(fmt::format("TMQI score {} outside [0, 1]", tmqi_score));
    }
    return (fsitm_score + tmqi_score) / 2.0;
}

ScoreRecord make_score_record(std::string hdr_id, std::string ldr_id, ChannelId c,
                              double fsitm_score, std::optional<double> tmqi) {
    ScoreRecord rec;
    rec.hdr_id = std::move(hdr_id);
    rec.ldr_id = std::move(ldr_id);
    rec.channel = c;
    rec.fsitm = fsitm_score;
    if (tmqi) {
        rec.tmqi = *tmqi;
        rec.combined = combine_with_tmqi(fsitm_score, *tmqi);
    }
    return rec;
}

} // namespace fsitm
