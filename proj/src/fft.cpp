#include "nf/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace nf {

Fft::Fft(std::size_t n) : n_(n) {
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("Fft: size must be a power of two");
    log2n_ = 0;
    while ((std::size_t(1) << log2n_) < n) ++log2n_;

    bitrev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < log2n_; ++b)
            if (i & (std::size_t(1) << b)) r |= std::size_t(1) << (log2n_ - 1 - b);
        bitrev_[i] = r;
    }
    twiddle_.resize(n / 2);
    twiddle_inv_.resize(n / 2);
    for (std::size_t i = 0; i < n / 2; ++i) {
        double ang = -2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
        twiddle_[i] = {std::cos(ang), std::sin(ang)};
        twiddle_inv_[i] = std::conj(twiddle_[i]);
    }
}

void Fft::run(std::complex<double>* a, std::size_t stride,
              const std::vector<std::complex<double>>& tw) const {
    for (std::size_t i = 0; i < n_; ++i) {
        std::size_t j = bitrev_[i];
        if (i < j) std::swap(a[i * stride], a[j * stride]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        std::size_t step = n_ / len;
        for (std::size_t i = 0; i < n_; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> u = a[(i + j) * stride];
                std::complex<double> v = a[(i + j + len / 2) * stride] * tw[j * step];
                a[(i + j) * stride] = u + v;
                a[(i + j + len / 2) * stride] = u - v;
            }
        }
    }
}

void Fft::forward(std::complex<double>* data, std::size_t stride) const {
    run(data, stride, twiddle_);
}

void Fft::inverse(std::complex<double>* data, std::size_t stride) const {
    run(data, stride, twiddle_inv_);
    double inv = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) data[i * stride] *= inv;
}

}  // namespace nf
