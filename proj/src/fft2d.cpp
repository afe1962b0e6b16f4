#include "fsitm/fft2d.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace fsitm {

namespace {

// The FFTW planner is not thread-safe; executions are.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

Fft2D::Fft2D(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("Fft2D dimensions must be positive");
    }
    const std::size_t n = static_cast<std::size_t>(width) * height;
    buf_in_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n));
    buf_out_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!buf_in_ || !buf_out_) {
        fftw_free(buf_in_);
        fftw_free(buf_out_);
        throw std::bad_alloc();
    }
    std::lock_guard lock(planner_mutex());
    forward_plan_ = fftw_plan_dft_2d(height, width, reinterpret_cast<fftw_complex*>(buf_in_),
                                     reinterpret_cast<fftw_complex*>(buf_out_), FFTW_FORWARD,
                                     FFTW_ESTIMATE);
    backward_plan_ = fftw_plan_dft_2d(height, width, reinterpret_cast<fftw_complex*>(buf_in_),
                                      reinterpret_cast<fftw_complex*>(buf_out_), FFTW_BACKWARD,
                                      FFTW_ESTIMATE);
}

Fft2D::~Fft2D() {
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
        fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    }
    fftw_free(buf_in_);
    fftw_free(buf_out_);
}

std::size_t Fft2D::size() const {
    return static_cast<std::size_t>(width_) * height_;
}

std::span<std::complex<double>> Fft2D::input() {
    return {buf_in_, size()};
}

std::span<const std::complex<double>> Fft2D::output() const {
    return {buf_out_, size()};
}

void Fft2D::forward() {
    fftw_execute(static_cast<fftw_plan>(forward_plan_));
}

void Fft2D::backward() {
    fftw_execute(static_cast<fftw_plan>(backward_plan_));
    const double inv = 1.0 / static_cast<double>(size());
    for (std::size_t i = 0; i < size(); ++i) {
        buf_out_[i] *= inv;
    }
}

} // namespace fsitm
