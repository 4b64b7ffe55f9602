#pragma once

#include <complex>
#include <vector>

namespace nf {

/// Iterative radix-2 complex FFT with cached twiddle tables.  Grid sizes are
/// powers of two by construction, so no other radix is needed.
class Fft {
  public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }
    /// In-place transform, stride-able so multi-d arrays transform per axis.
    /// forward: sum_x f(x) e^{-ikx}; inverse includes the 1/n factor.
    void forward(std::complex<double>* data, std::size_t stride = 1) const;
    void inverse(std::complex<double>* data, std::size_t stride = 1) const;

  private:
    std::size_t n_;
    int log2n_;
    std::vector<std::complex<double>> twiddle_;      // forward
    std::vector<std::complex<double>> twiddle_inv_;  // conjugate
    std::vector<std::size_t> bitrev_;
    void run(std::complex<double>* data, std::size_t stride,
             const std::vector<std::complex<double>>& tw) const;
};

}  // namespace nf
