#pragma once

#include <vector>

#include "nf/bracket.hpp"
#include "nf/functional.hpp"

namespace nf {

/// Raised by the frequency-generalized inverse when a divisor falls below
/// the configured threshold.  Never triggers in the fully resonant
/// unit-frequency case.
struct SmallDivisorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Time average along the periodic flow of h = int |psi|^2: keeps exactly
/// the charge-0 terms, unchanged.  Idempotent.
Functional flow_average(const Functional& F);

/// F - <F>; the part with vanishing flow average.
Functional deviation(const Functional& F);

/// Inverse of L_h on zero-average functionals: each charge-n term is
/// multiplied by i/(omega n).  omega is the common oscillator frequency
/// (unit in the KGW problem); |omega n| below `divisor_threshold` raises
/// SmallDivisorError, a charge-0 term raises PreconditionError.
Functional l_h_inverse(const Functional& F, const Rational& omega = Rational(1),
                       const Rational& divisor_threshold = Rational(0));

/// L_k F = {F, k} with k = int pphi^2/2: every phi factor is replaced by a
/// pphi factor carrying the same derivative kernel.  Lowers deg_phi, raises
/// deg_pphi, preserves charge.
Functional l_k(const Functional& F);

/// Solve L_{H0} G = dF for the zero-average representative:
/// G = sum_m (-1)^m (L_h^{-1} L_k)^m L_h^{-1} dF.  The series terminates
/// after max deg_phi(dF) applications of L_k.
Functional solve_generator(const Functional& dF);

/// Per-order functionals F_j of the Lie-series expansion
/// e^{eps^n L_{G_n}} ... e^{eps L_{G_1}} (H0 + eps H1), collected in powers
/// of eps.
struct LieSeriesLedger {
    std::vector<Functional> F;  // F[j] = order-j coefficient, F[0] = H0
};

/// Expand the composed exponentials of the given generators (G[0] acting at
/// order 1, ...) applied to H0 + eps H1, truncated at `order`.
LieSeriesLedger lie_collect(const Functional& H0, const Functional& H1,
                            const std::vector<Functional>& generators, int order);

struct NormalFormResult {
    int order = 0;
    Functional H0;
    std::vector<Functional> F;          // F_1..F_n as collected before each solve
    std::vector<Functional> Z;          // Z_1..Z_n
    std::vector<Functional> G;          // G_1..G_n
    std::vector<Functional> residuals;  // -L_{H0} G_j + F_j - Z_j, all zero
};

/// Run the order-n recursion Z_j = <F_j>, G_j = solve_generator(dF_j) for
/// the KGW Hamiltonian.  For n = 2 the outputs equal the closed forms below.
NormalFormResult normal_form(int order);

/// Same recursion for arbitrary (H0 = h + k, H1) in these variables.
NormalFormResult normal_form_of(const Functional& H0, const Functional& H1, int order);

/// The identity <F_2> = (1/2) <{dH1, G1}>: returns the right-hand side,
/// which must equal Z_2 exactly.
Functional z2_shortcut_check();

/// Hamiltonians of the KGW problem in complex Birkhoff coordinates, and the
/// closed-form first/second order results embedded for golden comparison.
namespace kgw {
Functional h();        // int |psi|^2
Functional k();        // int pphi^2/2
Functional H0();       // h + k
Functional H1();       // int |grad psi + grad psi*|^2/4 + |grad phi|^2/2 + phi (psi+psi*)^2/2
Functional Z1();       // closed-form first-order correction
Functional G1();       // closed-form first-order generator
Functional Z2();       // closed-form second-order correction
Functional G2();       // closed-form second-order generator
Functional F2();       // full second-order collection
Functional dH1();      // deviation of H1
Functional dF2();      // deviation of F2
// the five intermediate applications in the G2 computation
Functional lh_inv_dF2();
Functional lk_lh_inv_dF2();
Functional lh_inv_lk_lh_inv_dF2();
Functional lk_lh_inv_lk_lh_inv_dF2();
Functional lh_inv_lk_lh_inv_lk_lh_inv_dF2();
// first-order chain
Functional lh_inv_dH1();
Functional lk_lh_inv_dH1();
Functional lh_inv_lk_lh_inv_dH1();
}  // namespace kgw

}  // namespace nf
