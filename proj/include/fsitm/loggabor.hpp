#pragma once

#include <span>
#include <vector>

#include "fsitm/image.hpp"

namespace fsitm {

/// Parameters of the log-Gabor quadrature filter bank.
struct FilterParams {
    int nscale = 2;              // wavelet scales
    double min_wavelength = 2.0; // wavelength of the smallest-scale filter, pixels
    double mult = 2.0;           // scale factor between successive filters
    int norient = 6;             // orientations over [0, pi)
    double sigma_on_f = 0.55;    // radial bandwidth ratio
    double d_theta_sigma = 1.2;  // angular spread divisor: sigma_theta = (pi/norient)/d_theta_sigma

    /// Throws InvalidArgument when outside the documented domain.
    void validate() const;

    bool operator==(const FilterParams&) const = default;
};

/// Precomputed frequency-domain transfer functions over the FFT grid, one
/// real non-negative function per (scale, orientation). Each covers a single
/// orientation lobe, so the inverse transform's real and imaginary parts are
/// the even- and odd-symmetric filter responses. Immutable and shareable
/// across threads.
class LogGaborBank {
public:
    LogGaborBank(const FilterParams& params, int width, int height);

    const FilterParams& params() const { return params_; }
    int width() const { return width_; }
    int height() const { return height_; }
    int filter_count() const { return params_.nscale * params_.norient; }

    /// Transfer function for (scale, orientation), row-major over the
    /// unshifted FFT grid. The DC bin is exactly 0.
    std::span<const double> transfer(int scale, int orientation) const;

    /// Sum of all transfer functions. One inverse transform of this grid
    /// yields the filter-summed quadrature response directly (the transform
    /// is linear). The DC bin is exactly 0.
    std::span<const double> summed_transfer() const { return summed_; }

    /// Wavelength of the given scale: min_wavelength * mult^scale.
    double wavelength(int scale) const;

private:
    FilterParams params_;
    int width_;
    int height_;
    std::vector<std::vector<double>> filters_; // [scale * norient + orientation]
    std::vector<double> summed_;
};

/// Even/odd quadrature filter responses of one (scale, orientation).
struct QuadratureResponse {
    ImagePlane even;
    ImagePlane odd;
    int scale = 0;
    int orientation = 0;
};

/// Per-pixel local phase angles, radians in (-pi, pi].
struct PhaseMap {
    ImagePlane values;
};

/// Radial profile of the log-Gabor filter: exp(-ln^2(f/f0) / (2 ln^2(s))),
/// zero at f <= 0. Exposed for direct inspection of peak locations.
double log_gabor_radial(double frequency, double center_frequency, double sigma_on_f);

/// Filters the plane with every (scale, orientation) pair of the bank via
/// forward/inverse FFT. Response order is scale-major.
std::vector<QuadratureResponse> apply_bank(const ImagePlane& plane, const LogGaborBank& bank);

/// Local phase of a single response: atan2(odd, even), in (-pi, pi].
/// A (0, 0) response maps to 0.
PhaseMap local_phase(const QuadratureResponse& resp);

/// Locally weighted mean phase angle: the phase of the filter responses
/// summed over all scales and orientations, atan2(sum_even, |sum_odd|).
/// The odd magnitude keeps both step polarities in the zero (step) class;
/// values land in [-pi/2, pi/2], +pi/2 for bright lines, -pi/2 for dark.
PhaseMap lwmpa(const ImagePlane& plane, const LogGaborBank& bank);
PhaseMap lwmpa(const ImagePlane& plane, const FilterParams& params);

} // namespace fsitm
