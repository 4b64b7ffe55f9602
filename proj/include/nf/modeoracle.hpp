#pragma once

#include <array>
#include <map>
#include <vector>

#include "nf/functional.hpp"

namespace nf {

/// Independent finite-dimensional realization of the field algebra on a
/// truncated set of Fourier modes.  A Functional evaluates to an exact
/// polynomial in the mode variables (z_m, z*_m, q_m, p_m); the canonical
/// bracket of two such polynomials is computed directly from
/// {z_m, z*_m'} = -i delta, {q_m, p_m'} = delta.  Used as the oracle
/// against which symbolic brackets and averages are checked.
class ModeOracle {
  public:
    /// One formal momentum vector per mode (small integer coordinates).
    explicit ModeOracle(std::vector<std::array<long long, 3>> momenta);

    /// Variables are indexed field-major: z_0..z_{M-1}, w (=z*), q, p.
    /// A polynomial maps exponent vectors (length 4M) to coefficients.
    using Expo = std::vector<uint8_t>;
    using Poly = std::map<Expo, ExactComplex>;

    std::size_t modes() const { return momenta_.size(); }

    Poly evaluate(const Functional& F) const;
    Poly bracket(const Poly& A, const Poly& B) const;

    /// Phase average along the h-flow: keeps monomials whose total z-degree
    /// equals the total z*-degree.
    static Poly phase_average(const Poly& P);

    static Poly add(const Poly& A, const Poly& B);
    static Poly sub(const Poly& A, const Poly& B);
    static bool equal(const Poly& A, const Poly& B);

  private:
    std::vector<std::array<long long, 3>> momenta_;

    std::size_t var_of(FieldLabel f, std::size_t mode) const;
    Rational dot(std::size_t a, std::size_t b) const;
};

}  // namespace nf
