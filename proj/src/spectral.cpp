#include "nf/spectral.hpp"

#include <stdexcept>

namespace nf {

SpectralToolbox::SpectralToolbox(const Grid& grid) : grid_(grid), fft_(grid.n) {
    if (!grid.valid()) throw std::invalid_argument("SpectralToolbox: invalid grid");
    const std::size_t total = grid_.size();
    k2_.resize(total);
    dealias_.resize(total);
    const int n = grid_.n;
    const int cut = n / 3;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        double k2 = 0;
        bool keep = true;
        for (int d = grid_.dim - 1; d >= 0; --d) {
            int i = static_cast<int>(rem % n);
            rem /= n;
            int s = (i <= n / 2) ? i : i - n;
            double k = 2.0 * M_PI * s / grid_.length;
            k2 += k * k;
            if (std::abs(s) > cut) keep = false;
        }
        k2_[idx] = k2;
        dealias_[idx] = keep ? 1.0 : 0.0;
    }
}

double SpectralToolbox::wavenumber(int index) const {
    int s = (index <= grid_.n / 2) ? index : index - grid_.n;
    return 2.0 * M_PI * s / grid_.length;
}

void SpectralToolbox::transform(ArrayXcd& field, bool forward) const {
    const int n = grid_.n;
    const std::size_t total = grid_.size();
    for (int axis = 0; axis < grid_.dim; ++axis) {
        std::size_t stride = 1;
        for (int d = axis + 1; d < grid_.dim; ++d) stride *= n;
        const std::size_t lines = total / n;
        for (std::size_t line = 0; line < lines; ++line) {
            // decompose line index into the non-axis coordinates
            std::size_t inner = line % stride;
            std::size_t outer = line / stride;
            std::size_t base = outer * stride * n + inner;
            if (forward)
                fft_.forward(field.data() + base, stride);
            else
                fft_.inverse(field.data() + base, stride);
        }
    }
}

void SpectralToolbox::to_fourier(ArrayXcd& field) const { transform(field, true); }
void SpectralToolbox::to_real(ArrayXcd& field) const { transform(field, false); }

ArrayXcd SpectralToolbox::laplacian(const ArrayXcd& field) const {
    ArrayXcd f = field;
    to_fourier(f);
    f *= (-k2_).cast<cplx>();
    to_real(f);
    return f;
}

ArrayXd SpectralToolbox::laplacian(const ArrayXd& field) const {
    ArrayXcd f = field.cast<cplx>();
    return laplacian(f).real();
}

ArrayXcd SpectralToolbox::derivative(const ArrayXcd& field, int axis) const {
    if (axis < 0 || axis >= grid_.dim) throw std::invalid_argument("derivative: bad axis");
    ArrayXcd f = field;
    to_fourier(f);
    const int n = grid_.n;
    const std::size_t total = grid_.size();
    std::size_t stride = 1;
    for (int d = axis + 1; d < grid_.dim; ++d) stride *= n;
    for (std::size_t idx = 0; idx < total; ++idx) {
        int i = static_cast<int>((idx / stride) % n);
        // the Nyquist mode is real; an odd derivative maps it to zero
        double k = (i == n / 2) ? 0.0 : wavenumber(i);
        f[idx] *= cplx(0.0, k);
    }
    to_real(f);
    return f;
}

ArrayXd SpectralToolbox::inverse_laplacian_zero_mean(const ArrayXd& source) const {
    ArrayXcd f = source.cast<cplx>();
    to_fourier(f);
    f[0] = 0.0;  // remove the mean, pin mean(phi) = 0
    for (Eigen::Index i = 1; i < f.size(); ++i) {
        if (k2_[i] > 0)
            f[i] /= -k2_[i];
        else
            f[i] = 0.0;
    }
    to_real(f);
    return f.real();
}

void SpectralToolbox::dealias(ArrayXcd& field) const {
    to_fourier(field);
    field *= dealias_.cast<cplx>();
    to_real(field);
}

ArrayXd SpectralToolbox::dealias(const ArrayXd& field) const {
    ArrayXcd f = field.cast<cplx>();
    dealias(f);
    return f.real();
}

}  // namespace nf
