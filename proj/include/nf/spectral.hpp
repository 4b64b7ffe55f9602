#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "nf/fft.hpp"

namespace nf {

using ArrayXd = Eigen::ArrayXd;
using ArrayXcd = Eigen::ArrayXcd;
using cplx = std::complex<double>;

/// Periodic box discretization: `n` points per dimension (power of two),
/// cubic box of side `length` in the dimensionless units of the problem.
/// Wavenumbers are 2*pi*j/length with j the signed mode index; the Nyquist
/// mode is treated as real.
struct Grid {
    int dim = 1;
    int n = 256;
    double length = 16.0 * M_PI;

    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
        return s;
    }
    double dx() const { return length / n; }
    double cell_volume() const {
        double v = 1;
        for (int d = 0; d < dim; ++d) v *= dx();
        return v;
    }
    bool valid() const { return (dim >= 1 && dim <= 3) && n > 1 && ((n & (n - 1)) == 0) && length > 0; }
};

/// Fourier-side kernels on a Grid: exact derivatives and Laplacian on
/// resolved modes, zero-mean Poisson inversion, 2/3-rule dealiasing, and
/// quadrature helpers.  All arrays are flattened row-major.
class SpectralToolbox {
  public:
    explicit SpectralToolbox(const Grid& grid);

    const Grid& grid() const { return grid_; }
    const ArrayXd& k_squared() const { return k2_; }

    void to_fourier(ArrayXcd& field) const;
    void to_real(ArrayXcd& field) const;

    ArrayXcd laplacian(const ArrayXcd& field_real_space) const;
    ArrayXd laplacian(const ArrayXd& field_real_space) const;
    ArrayXcd derivative(const ArrayXcd& field_real_space, int axis) const;

    /// Solve lap(phi) = source - mean(source) with mean(phi) = 0.
    ArrayXd inverse_laplacian_zero_mean(const ArrayXd& source) const;

    /// Zero every mode with a signed index beyond n/3 on any axis.
    void dealias(ArrayXcd& field_real_space) const;
    ArrayXd dealias(const ArrayXd& field_real_space) const;

    double integrate(const ArrayXd& f) const { return f.sum() * grid_.cell_volume(); }
    double integrate_abs2(const ArrayXcd& f) const { return f.abs2().sum() * grid_.cell_volume(); }
    double mean(const ArrayXd& f) const { return f.sum() / static_cast<double>(f.size()); }
    /// f - mean(f): the periodic-box zero-mode (Jeans) projection.
    ArrayXd zero_mean(const ArrayXd& f) const { return f - mean(f); }

    /// Coordinates of grid point index along an axis.
    double coord(int index) const { return index * grid_.dx(); }
    /// Signed wavenumber of mode index along an axis.
    double wavenumber(int index) const;

  private:
    Grid grid_;
    Fft fft_;
    ArrayXd k2_;        // |k|^2 per flattened mode
    ArrayXd dealias_;   // 1 inside the 2/3 band, 0 outside
    void transform(ArrayXcd& field, bool forward) const;
};

}  // namespace nf
