#pragma once

#include <map>

#include "nf/functional.hpp"

namespace nf {

/// Canonical Poisson bracket {F, G} built from the contractions
/// {psi(x), psi*(y)} = -i delta(x-y) and {phi(x), pphi(y)} = delta(x-y).
/// Each (conjugate-pair) factor contraction identifies the paired momenta
/// with opposite orientation, multiplies the kernels and re-canonicalizes.
/// Bilinear and antisymmetric by construction; total on canonical inputs.
Functional poisson_bracket(const Functional& F, const Functional& G);

/// Partition of the terms by charge n = deg(psi) - deg(psi_star).
/// Recombining the parts yields F.
std::map<int, Functional> charge_split(const Functional& F);

/// Terms of F with the given charge (empty Functional if none).
Functional charge_part(const Functional& F, int n);

}  // namespace nf
