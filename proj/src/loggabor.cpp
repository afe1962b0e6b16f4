#include "fsitm/loggabor.hpp"

#include <cmath>
#include <complex>
#include <fmt/format.h>
#include <numbers>

#include "fsitm/fft2d.hpp"

namespace fsitm {

namespace {

constexpr double kPi = std::numbers::pi;

// Raised-cosine lowpass suppressing FFT corner frequencies: unity below
// 0.4, zero above 0.5, cosine taper centered at radius 0.45.
double lowpass(double radius) {
    constexpr double inner = 0.40;
    constexpr double outer = 0.50;
    if (radius <= inner) {
        return 1.0;
    }
    if (radius >= outer) {
        return 0.0;
    }
    return 0.5 * (1.0 + std::cos(kPi * (radius - inner) / (outer - inner)));
}

// Signed frequency of FFT bin k out of n, in cycles/pixel: [-0.5, 0.5].
double bin_frequency(int k, int n) {
    return (k <= n / 2 ? k : k - n) / static_cast<double>(n);
}

} // namespace

void FilterParams::validate() const {
    if (nscale < 1) {
        throw InvalidArgument("nscale must be at least 1");
    }
    if (min_wavelength < 2.0) {
        throw InvalidArgument("min_wavelength must be at least 2 pixels");
    }
    if (mult <= 1.0) {
        throw InvalidArgument("mult must exceed 1");
    }
    if (norient < 1) {
        throw InvalidArgument("norient must be at least 1");
    }
    if (sigma_on_f <= 0.0 || sigma_on_f >= 1.0) {
        throw InvalidArgument("sigma_on_f must lie in (0, 1)");
    }
    if (d_theta_sigma <= 0.0) {
        throw InvalidArgument("d_theta_sigma must be positive");
    }
}

double log_gabor_radial(double frequency, double center_frequency, double sigma_on_f) {
    if (frequency <= 0.0) {
        return 0.0;
    }
    const double log_ratio = std::log(frequency / center_frequency);
    const double log_sigma = std::log(sigma_on_f);
    return std::exp(-(log_ratio * log_ratio) / (2.0 * log_sigma * log_sigma));
}

double LogGaborBank::wavelength(int scale) const {
    return params_.min_wavelength * std::pow(params_.mult, scale);
}

LogGaborBank::LogGaborBank(const FilterParams& params, int width, int height)
    : params_(params), width_(width), height_(height) {
    params_.validate();
    const double lambda_max = wavelength(params_.nscale - 1);
    if (lambda_max > std::min(width, height)) {
        throw BankTooLarge(fmt::format(
            "largest wavelength {:.1f} exceeds the {}x{} image", lambda_max, width, height));
    }

    const std::size_t n = static_cast<std::size_t>(width) * height;

    // Per-bin log radius, orientation angle and lowpass, shared by all
    // filters. The filter factors into a radial term (per scale) and an
    // angular term (per orientation), so each exponential is evaluated
    // nscale + norient times instead of nscale * norient.
    std::vector<double> log_radius(n), angle(n), lp(n);
    for (int y = 0; y < height; ++y) {
        const double fy = bin_frequency(y, height);
        for (int x = 0; x < width; ++x) {
            const double fx = bin_frequency(x, width);
            const std::size_t i = static_cast<std::size_t>(y) * width + x;
            const double radius = std::hypot(fx, fy);
            log_radius[i] = radius > 0.0 ? std::log(radius) : 0.0;
            angle[i] = std::atan2(-fy, fx);
            lp[i] = radius > 0.0 ? lowpass(radius) : 0.0; // DC bin stays exactly 0
        }
    }

    const double sigma_theta = (kPi / params_.norient) / params_.d_theta_sigma;
    const double log_sigma = std::log(params_.sigma_on_f);
    const double radial_denom = 2.0 * log_sigma * log_sigma;
    const double angular_denom = 2.0 * sigma_theta * sigma_theta;

    // radial term per scale, with the lowpass folded in
    std::vector<std::vector<double>> radial(static_cast<std::size_t>(params_.nscale));
    for (int s = 0; s < params_.nscale; ++s) {
        const double log_f0 = std::log(1.0 / wavelength(s));
        auto& term = radial[s];
        term.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = log_radius[i] - log_f0;
            term[i] = lp[i] > 0.0 ? std::exp(-d * d / radial_denom) * lp[i] : 0.0;
        }
    }

    // angular term per orientation
    std::vector<std::vector<double>> angular(static_cast<std::size_t>(params_.norient));
    for (int r = 0; r < params_.norient; ++r) {
        const double theta_r = r * kPi / params_.norient;
        auto& term = angular[r];
        term.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double d_theta = std::fabs(angle[i] - theta_r);
            d_theta = std::min(d_theta, 2.0 * kPi - d_theta);
            term[i] = std::exp(-d_theta * d_theta / angular_denom);
        }
    }

    filters_.reserve(static_cast<std::size_t>(filter_count()));
    for (int s = 0; s < params_.nscale; ++s) {
        for (int r = 0; r < params_.norient; ++r) {
            std::vector<double> filter(n);
            for (std::size_t i = 0; i < n; ++i) {
                filter[i] = radial[s][i] * angular[r][i];
            }
            filters_.push_back(std::move(filter));
        }
    }

    // Sum of all transfers, factored as (sum of radial) * (sum of angular).
    // The DC bin stays exactly 0 because every radial term is 0 there.
    summed_.resize(n);
    std::vector<double> radial_sum(n, 0.0), angular_sum(n, 0.0);
    for (const auto& term : radial) {
        for (std::size_t i = 0; i < n; ++i) {
            radial_sum[i] += term[i];
        }
    }
    for (const auto& term : angular) {
        for (std::size_t i = 0; i < n; ++i) {
            angular_sum[i] += term[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        summed_[i] = radial_sum[i] * angular_sum[i];
    }
}

std::span<const double> LogGaborBank::transfer(int scale, int orientation) const {
    return filters_[static_cast<std::size_t>(scale) * params_.norient + orientation];
}

namespace {

std::vector<std::complex<double>> forward_spectrum(const ImagePlane& plane, Fft2D& fft) {
    const std::size_t n = plane.pixel_count();
    auto src = plane.samples();
    auto in = fft.input();
    for (std::size_t i = 0; i < n; ++i) {
        in[i] = src[i];
    }
    fft.forward();
    auto out = fft.output();
    return {out.begin(), out.end()};
}

// Writes spectrum * transfer into the FFT input buffer.
void filter_spectrum(std::span<const std::complex<double>> spectrum,
                     std::span<const double> transfer, Fft2D& fft) {
    auto in = fft.input();
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        in[i] = spectrum[i] * transfer[i];
    }
}

} // namespace

std::vector<QuadratureResponse> apply_bank(const ImagePlane& plane, const LogGaborBank& bank) {
    if (plane.width() != bank.width() || plane.height() != bank.height()) {
        throw DimensionMismatch(fmt::format("plane {}x{} vs bank {}x{}", plane.width(),
                                            plane.height(), bank.width(), bank.height()));
    }
    const std::size_t n = plane.pixel_count();
    Fft2D fft(plane.width(), plane.height());
    const auto spectrum = forward_spectrum(plane, fft);

    std::vector<QuadratureResponse> responses;
    responses.reserve(static_cast<std::size_t>(bank.filter_count()));
    for (int s = 0; s < bank.params().nscale; ++s) {
        for (int r = 0; r < bank.params().norient; ++r) {
            filter_spectrum(spectrum, bank.transfer(s, r), fft);
            fft.backward();
            auto response = fft.output();
            std::vector<double> even(n), odd(n);
            for (std::size_t i = 0; i < n; ++i) {
                even[i] = response[i].real();
                odd[i] = response[i].imag();
            }
            responses.push_back(QuadratureResponse{
                ImagePlane(plane.width(), plane.height(), std::move(even)),
                ImagePlane(plane.width(), plane.height(), std::move(odd)), s, r});
        }
    }
    return responses;
}

PhaseMap local_phase(const QuadratureResponse& resp) {
    if (!resp.even.same_size(resp.odd)) {
        throw DimensionMismatch("quadrature response planes differ in size");
    }
    const std::size_t n = resp.even.pixel_count();
    std::vector<double> phase(n);
    auto even = resp.even.samples();
    auto odd = resp.odd.samples();
    for (std::size_t i = 0; i < n; ++i) {
        // +0.0 folds negative zeros so a null response maps to 0, not +-pi.
        phase[i] = std::atan2(odd[i] + 0.0, even[i] + 0.0);
    }
    return PhaseMap{ImagePlane(resp.even.width(), resp.even.height(), std::move(phase))};
}

PhaseMap lwmpa(const ImagePlane& plane, const LogGaborBank& bank) {
    if (plane.width() != bank.width() || plane.height() != bank.height()) {
        throw DimensionMismatch(fmt::format("plane {}x{} vs bank {}x{}", plane.width(),
                                            plane.height(), bank.width(), bank.height()));
    }
    const std::size_t n = plane.pixel_count();

    // Only the filter-summed response matters here, and the inverse transform
    // is linear, so one backward FFT of the summed transfer replaces one per
    // filter. Real/imaginary parts are the summed even/odd responses.
    Fft2D fft(plane.width(), plane.height());
    {
        auto src = plane.samples();
        auto in = fft.input();
        for (std::size_t i = 0; i < n; ++i) {
            in[i] = src[i];
        }
    }
    fft.forward();
    filter_spectrum(fft.output(), bank.summed_transfer(), fft);
    fft.backward();
    const auto response = fft.output();

    std::vector<double> phase(n);
    for (std::size_t i = 0; i < n; ++i) {
        phase[i] = std::atan2(response[i].real(), std::fabs(response[i].imag()));
    }
    return PhaseMap{ImagePlane(plane.width(), plane.height(), std::move(phase))};
}

PhaseMap lwmpa(const ImagePlane& plane, const FilterParams& params) {
    return lwmpa(plane, LogGaborBank(params, plane.width(), plane.height()));
}

} // namespace fsitm
