#include "nf/bracket.hpp"

namespace nf {

namespace {

// Contraction weight for a factor of F against a factor of G,
// zero if the pair is not conjugate.
ExactComplex contraction_weight(FieldLabel in_f, FieldLabel in_g) {
    using L = FieldLabel;
    if (in_f == L::psi && in_g == L::psi_star) return -ExactComplex::i();
    if (in_f == L::psi_star && in_g == L::psi) return ExactComplex::i();
    if (in_f == L::phi && in_g == L::pphi) return ExactComplex(1);
    if (in_f == L::pphi && in_g == L::phi) return ExactComplex(-1);
    return ExactComplex(0);
}

// Substitute the contracted factor's momentum using its own term's
// conservation law: k_a := -(sum of the term's other momenta).
KPoly eliminate_contracted(const KPoly& kernel, int a, int m, int offset) {
    if (a == m) return kernel;  // stored kernels never reference the last symbol
    std::vector<std::pair<long long, int>> repl;
    repl.reserve(m - 1);
    for (int i = 1; i <= m; ++i)
        if (i != a) repl.push_back({-1, i + offset});
    return kernel.substitute_momentum(a + offset, repl);
}

}  // namespace

Functional poisson_bracket(const Functional& F, const Functional& G) {
    std::vector<Term> out;
    for (const Term& tf : F.terms()) {
        const int mf = static_cast<int>(tf.factors.size());
        for (const Term& tg : G.terms()) {
            const int mg = static_cast<int>(tg.factors.size());
            // shift G's momentum symbols past F's
            std::map<int, int> shift;
            for (int j = 1; j <= mg; ++j) shift[j] = j + mf;
            const KPoly kg_shifted = tg.kernel.renamed(shift);

            for (int a = 1; a <= mf; ++a) {
                for (int b = 1; b <= mg; ++b) {
                    ExactComplex w =
                        contraction_weight(tf.factors[a - 1].field, tg.factors[b - 1].field);
                    if (w.is_zero()) continue;

                    KPoly kf = eliminate_contracted(tf.kernel, a, mf, 0);
                    KPoly kg = eliminate_contracted(kg_shifted, b, mg, mf);

                    std::vector<Factor> survivors;
                    survivors.reserve(mf + mg - 2);
                    for (int i = 1; i <= mf; ++i)
                        if (i != a) survivors.push_back({tf.factors[i - 1].field, i});
                    for (int j = 1; j <= mg; ++j)
                        if (j != b) survivors.push_back({tg.factors[j - 1].field, j + mf});

                    if (auto t = canonicalize_term(w * tf.coeff * tg.coeff, std::move(survivors),
                                                   kf * kg))
                        out.push_back(std::move(*t));
                }
            }
        }
    }
    return merge_canonical(std::move(out));
}

std::map<int, Functional> charge_split(const Functional& F) {
    std::map<int, std::vector<Term>> parts;
    for (const Term& t : F.terms()) parts[t.charge()].push_back(t);
    std::map<int, Functional> result;
    for (auto& [n, terms] : parts) result.emplace(n, merge_canonical(std::move(terms)));
    return result;
}

Functional charge_part(const Functional& F, int n) {
    std::vector<Term> terms;
    for (const Term& t : F.terms())
        if (t.charge() == n) terms.push_back(t);
    return merge_canonical(std::move(terms));
}

}  // namespace nf
