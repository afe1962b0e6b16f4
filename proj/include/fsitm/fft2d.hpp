#pragma once

#include <complex>
#include <span>

namespace fsitm {

/// Complex-to-complex 2D FFT of fixed dimensions, backed by FFTW. Transforms
/// run in place on the instance's planning-aligned buffers: fill input(),
/// call forward()/backward(), read output(). Instances are not thread-safe;
/// create one per thread. Plan creation is internally serialized, so
/// concurrent construction is fine.
class Fft2D {
public:
    Fft2D(int width, int height);
    ~Fft2D();

    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const; // width * height

    std::span<std::complex<double>> input();
    std::span<const std::complex<double>> output() const;

    /// output = DFT(input), negative-exponent convention, unnormalized.
    void forward();

    /// output = IDFT(input), positive-exponent convention, normalized
    /// by 1/(width*height).
    void backward();

private:
    int width_;
    int height_;
    void* forward_plan_;
    void* backward_plan_;
    std::complex<double>* buf_in_;
    std::complex<double>* buf_out_;
};

} // namespace fsitm
