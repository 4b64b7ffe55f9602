#include "nf/normalform.hpp"

#include "nf/parse.hpp"

namespace nf {

Functional flow_average(const Functional& F) { return charge_part(F, 0); }

Functional deviation(const Functional& F) {
    std::vector<Term> terms;
    for (const Term& t : F.terms())
        if (t.charge() != 0) terms.push_back(t);
    return merge_canonical(std::move(terms));
}

Functional l_h_inverse(const Functional& F, const Rational& omega,
                       const Rational& divisor_threshold) {
    std::vector<Term> terms;
    for (const Term& t : F.terms()) {
        int n = t.charge();
        if (n == 0)
            throw PreconditionError("l_h_inverse: nonzero charge-0 component in input");
        Rational divisor = omega * Rational(n);
        Rational mag = divisor < Rational(0) ? -divisor : divisor;
        if (mag.is_zero()) throw SmallDivisorError("l_h_inverse: zero frequency");
        if (mag < divisor_threshold)
            throw SmallDivisorError("l_h_inverse: divisor below threshold for charge " +
                                    std::to_string(n));
        Term s = t;
        s.coeff = t.coeff * ExactComplex(Rational(0), Rational(1) / divisor);
        terms.push_back(std::move(s));
    }
    return merge_canonical(std::move(terms));
}

Functional l_k(const Functional& F) {
    std::vector<Term> out;
    for (const Term& t : F.terms()) {
        for (std::size_t p = 0; p < t.factors.size(); ++p) {
            if (t.factors[p].field != FieldLabel::phi) continue;
            std::vector<Factor> factors = t.factors;
            factors[p].field = FieldLabel::pphi;
            if (auto c = canonicalize_term(t.coeff, std::move(factors), t.kernel))
                out.push_back(std::move(*c));
        }
    }
    return merge_canonical(std::move(out));
}

Functional solve_generator(const Functional& dF) {
    Functional current = l_h_inverse(dF);
    Functional G = current;
    ExactComplex sign(-1);
    while (true) {
        Functional next = l_k(current);
        if (next.is_zero()) break;
        current = l_h_inverse(next);
        G += current.scaled(sign);
        sign = sign * ExactComplex(-1);
    }
    return G;
}

LieSeriesLedger lie_collect(const Functional& H0, const Functional& H1,
                            const std::vector<Functional>& generators, int order) {
    // The ledger records, at each order j, the coefficient F_j of eps^j
    // BEFORE exp(eps^j L_{G_j}) is applied: the known side of the j-th
    // homological equation.  F_1 = H1, F_2 = L_{G1}H1 + (1/2)L_{G1}^2 H0.
    LieSeriesLedger ledger;
    ledger.F.assign(order + 1, Functional{});
    ledger.F[0] = H0;
    if (order >= 1) ledger.F[1] = H1;

    std::vector<Functional> series(order + 1);
    series[0] = H0;
    if (order >= 1) series[1] = H1;

    for (std::size_t gi = 0; gi < generators.size(); ++gi) {
        const int j = static_cast<int>(gi) + 1;  // exp(eps^j L_{G_j})
        if (j >= order) break;
        std::vector<Functional> next(order + 1);
        for (int p = 0; p <= order; ++p) {
            Functional acc = series[p];
            Rational factorial(1);
            for (int m = 1; p - m * j >= 0; ++m) {
                factorial = factorial * Rational(m);
                Functional base = series[p - m * j];
                for (int r = 0; r < m; ++r) base = poisson_bracket(base, generators[gi]);
                acc += base.scaled(ExactComplex(Rational(1) / factorial));
            }
            next[p] = std::move(acc);
        }
        series = std::move(next);
        if (j + 1 <= order) ledger.F[j + 1] = series[j + 1];
    }
    return ledger;
}

NormalFormResult normal_form_of(const Functional& H0, const Functional& H1, int order) {
    if (order < 1) throw PreconditionError("normal_form: order must be >= 1");
    NormalFormResult res;
    res.order = order;
    res.H0 = H0;

    std::vector<Functional> series(order + 1);
    series[0] = H0;
    series[1] = H1;

    for (int j = 1; j <= order; ++j) {
        Functional Fj = series[j];
        Functional Zj = flow_average(Fj);
        Functional Gj = solve_generator(deviation(Fj));

        // residual -L_{H0} G_j + F_j - Z_j
        Functional residual = Fj - Zj - poisson_bracket(Gj, H0);

        res.F.push_back(Fj);
        res.Z.push_back(Zj);
        res.G.push_back(Gj);
        res.residuals.push_back(residual);

        if (j == order) break;

        // apply exp(eps^j L_{G_j}) to the collected series
        std::vector<Functional> next(order + 1);
        for (int p = 0; p <= order; ++p) {
            Functional acc = series[p];
            Rational factorial(1);
            for (int m = 1; p - m * j >= 0; ++m) {
                factorial = factorial * Rational(m);
                Functional base = series[p - m * j];
                for (int r = 0; r < m; ++r) base = poisson_bracket(base, Gj);
                acc += base.scaled(ExactComplex(Rational(1) / factorial));
            }
            next[p] = std::move(acc);
        }
        series = std::move(next);
    }
    return res;
}

NormalFormResult normal_form(int order) { return normal_form_of(kgw::H0(), kgw::H1(), order); }

Functional z2_shortcut_check() {
    Functional dH1 = deviation(kgw::H1());
    Functional G1 = solve_generator(dH1);
    return flow_average(poisson_bracket(dH1, G1)).scaled(ExactComplex(Rational(1, 2)));
}

// --------------------------------------------------------------- KGW data
//
// Closed-form inputs and results, entered in position-space grammar and
// canonicalized on construction.  These strings are the golden data for the
// whole engine.

namespace kgw {

Functional h() { return build("int[psi psi*]"); }
Functional k() { return build("int[(1/2) pphi^2]"); }
Functional H0() { return h() + k(); }

Functional H1() {
    return build(
        "int[ (1/4)(grad(psi).grad(psi) + 2 grad(psi).grad(psi*) + grad(psi*).grad(psi*))"
        " + (1/2) grad(phi).grad(phi) + (1/2) phi (psi + psi*)^2 ]");
}

Functional Z1() {
    return build(
        "int[ (1/2) grad(phi).grad(phi) + (1/2) grad(psi).grad(psi*) + phi psi psi* ]");
}

Functional dH1() {
    return build(
        "int[ (1/4)(grad(psi).grad(psi) + grad(psi*).grad(psi*))"
        " + (1/2) phi (psi^2 + psi*^2) ]");
}

Functional G1() {
    return build(
        "int[ (i/8)(grad(psi).grad(psi) - grad(psi*).grad(psi*))"
        " + (i/4) phi (psi^2 - psi*^2) + (1/8) pphi (psi^2 + psi*^2) ]");
}

Functional lh_inv_dH1() {
    return build(
        "int[ (i/8)(grad(psi).grad(psi) - grad(psi*).grad(psi*)) + (i/4) phi (psi^2 - psi*^2) ]");
}

Functional lk_lh_inv_dH1() { return build("int[ (i/4) pphi (psi^2 - psi*^2) ]"); }

Functional lh_inv_lk_lh_inv_dH1() { return build("-1 * int[ (1/8) pphi (psi^2 + psi*^2) ]"); }

Functional Z2() {
    return build(
        "int[ -1/8 lap(psi) lap(psi*)"
        " + (1/4) phi (psi* lap(psi) + psi lap(psi*))"
        " + (i/16) pphi (psi* lap(psi) - psi lap(psi*))"
        " - (1/2) phi^2 psi psi* + (1/16) psi^2 psi*^2 ]");
}

Functional dF2() {
    return build(
        "int[ -1/8 (lap(psi)^2 + lap(psi*)^2)"
        " + (1/8) psi psi* (psi^2 + psi*^2)"
        " + (1/32)(psi^4 + psi*^4)"
        " - (1/8) lap(phi) (psi^2 + psi*^2)"
        " + (1/2) phi (psi lap(psi) + psi* lap(psi*))"
        " - (1/2) phi^2 (psi^2 + psi*^2)"
        " - (i/8) pphi (psi lap(psi) - psi* lap(psi*))"
        " + (i/4) phi pphi (psi^2 - psi*^2) ]");
}

Functional F2() { return Z2() + dF2(); }

Functional lh_inv_dF2() {
    return build(
        "int[ -i/16 (lap(psi)^2 - lap(psi*)^2)"
        " + (i/16) psi psi* (psi^2 - psi*^2)"
        " + (i/128)(psi^4 - psi*^4)"
        " - (i/16) lap(phi) (psi^2 - psi*^2)"
        " + (i/4) phi (psi lap(psi) - psi* lap(psi*))"
        " - (i/4) phi^2 (psi^2 - psi*^2)"
        " + (1/16) pphi (psi lap(psi) + psi* lap(psi*))"
        " - (1/8) phi pphi (psi^2 + psi*^2) ]");
}

Functional lk_lh_inv_dF2() {
    return build(
        "int[ (i/4) pphi (psi lap(psi) - psi* lap(psi*))"
        " - (i/2) phi pphi (psi^2 - psi*^2)"
        " - (1/8) pphi^2 (psi^2 + psi*^2)"
        " - (i/16) lap(pphi) (psi^2 - psi*^2) ]");
}

Functional lh_inv_lk_lh_inv_dF2() {
    return build(
        "int[ -1/8 pphi (psi lap(psi) + psi* lap(psi*))"
        " + (1/4) phi pphi (psi^2 + psi*^2)"
        " - (i/16) pphi^2 (psi^2 - psi*^2)"
        " + (1/32) lap(pphi) (psi^2 + psi*^2) ]");
}

Functional lk_lh_inv_lk_lh_inv_dF2() { return build("int[ (1/4) pphi^2 (psi^2 + psi*^2) ]"); }

Functional lh_inv_lk_lh_inv_lk_lh_inv_dF2() {
    return build("int[ (i/8) pphi^2 (psi^2 - psi*^2) ]");
}

Functional G2() {
    return build(
        "int[ -i/16 (lap(psi)^2 - lap(psi*)^2)"
        " + (i/16) psi psi* (psi^2 - psi*^2)"
        " + (i/128)(psi^4 - psi*^4)"
        " - (i/16) lap(phi) (psi^2 - psi*^2)"
        " + (i/4) phi (psi lap(psi) - psi* lap(psi*))"
        " - (i/4) phi^2 (psi^2 - psi*^2)"
        " + (3/16) pphi (psi lap(psi) + psi* lap(psi*))"
        " - (3/8) phi pphi (psi^2 + psi*^2)"
        " + (3i/16) pphi^2 (psi^2 - psi*^2)"
        " - (1/32) lap(pphi) (psi^2 + psi*^2) ]");
}

}  // namespace kgw

}  // namespace nf
