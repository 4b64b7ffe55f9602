#include "nf/modeoracle.hpp"

namespace nf {

ModeOracle::ModeOracle(std::vector<std::array<long long, 3>> momenta)
    : momenta_(std::move(momenta)) {}

std::size_t ModeOracle::var_of(FieldLabel f, std::size_t mode) const {
    return static_cast<std::size_t>(f) * momenta_.size() + mode;
}

Rational ModeOracle::dot(std::size_t a, std::size_t b) const {
    long long s = 0;
    for (int c = 0; c < 3; ++c) s += momenta_[a][c] * momenta_[b][c];
    return Rational(s);
}

namespace {

// orientation of the plane-wave exponent carried by a factor
int orientation(FieldLabel f) {
    return (f == FieldLabel::psi_star || f == FieldLabel::pphi) ? -1 : 1;
}

void add_to(ModeOracle::Poly& P, const ModeOracle::Expo& e, const ExactComplex& c) {
    if (c.is_zero()) return;
    auto it = P.find(e);
    if (it == P.end()) {
        P.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) P.erase(it);
    }
}

ModeOracle::Poly multiply(const ModeOracle::Poly& A, const ModeOracle::Poly& B) {
    ModeOracle::Poly R;
    for (const auto& [ea, ca] : A) {
        for (const auto& [eb, cb] : B) {
            ModeOracle::Expo e = ea;
            for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
            add_to(R, e, ca * cb);
        }
    }
    return R;
}

ModeOracle::Poly derivative(const ModeOracle::Poly& A, std::size_t var) {
    ModeOracle::Poly R;
    for (const auto& [e, c] : A) {
        if (e[var] == 0) continue;
        ModeOracle::Expo d = e;
        d[var] -= 1;
        add_to(R, d, c * ExactComplex(static_cast<long long>(e[var])));
    }
    return R;
}

}  // namespace

ModeOracle::Poly ModeOracle::evaluate(const Functional& F) const {
    const std::size_t M = momenta_.size();
    Poly result;
    for (const Term& t : F.terms()) {
        const std::size_t m = t.factors.size();
        std::vector<std::size_t> assign(m, 0);
        bool done = m == 0;
        if (m == 0) {
            // empty integral: the box volume, normalized to 1 in this realization
            add_to(result, Expo(4 * M, 0), t.coeff * t.kernel.evaluate({}));
            continue;
        }
        while (!done) {
            // oriented momenta of this assignment
            std::array<long long, 3> total{0, 0, 0};
            for (std::size_t i = 0; i < m; ++i) {
                int orient = orientation(t.factors[i].field);
                for (int c = 0; c < 3; ++c) total[c] += orient * momenta_[assign[i]][c];
            }
            if (total[0] == 0 && total[1] == 0 && total[2] == 0) {
                std::map<KVar, Rational> dots;
                for (std::size_t i = 0; i < m; ++i) {
                    for (std::size_t j = i; j < m; ++j) {
                        int oi = orientation(t.factors[i].field);
                        int oj = orientation(t.factors[j].field);
                        dots[kvar(static_cast<int>(i) + 1, static_cast<int>(j) + 1)] =
                            dot(assign[i], assign[j]) * Rational(oi * oj);
                    }
                }
                ExactComplex kval = t.kernel.evaluate(dots);
                if (!kval.is_zero()) {
                    Expo e(4 * M, 0);
                    for (std::size_t i = 0; i < m; ++i) e[var_of(t.factors[i].field, assign[i])]++;
                    add_to(result, e, t.coeff * kval);
                }
            }
            // next assignment
            std::size_t pos = 0;
            while (pos < m) {
                if (++assign[pos] < M) break;
                assign[pos] = 0;
                ++pos;
            }
            done = pos == m;
        }
    }
    return result;
}

ModeOracle::Poly ModeOracle::bracket(const Poly& A, const Poly& B) const {
    const std::size_t M = momenta_.size();
    Poly R;
    const ExactComplex minus_i = -ExactComplex::i();
    for (std::size_t mode = 0; mode < M; ++mode) {
        std::size_t z = var_of(FieldLabel::psi, mode);
        std::size_t w = var_of(FieldLabel::psi_star, mode);
        std::size_t q = var_of(FieldLabel::phi, mode);
        std::size_t p = var_of(FieldLabel::pphi, mode);

        auto accumulate = [&](const Poly& P, const ExactComplex& weight) {
            for (const auto& [e, c] : P) add_to(R, e, c * weight);
        };
        accumulate(multiply(derivative(A, z), derivative(B, w)), minus_i);
        accumulate(multiply(derivative(A, w), derivative(B, z)), ExactComplex::i());
        accumulate(multiply(derivative(A, q), derivative(B, p)), ExactComplex(1));
        accumulate(multiply(derivative(A, p), derivative(B, q)), ExactComplex(-1));
    }
    return R;
}

ModeOracle::Poly ModeOracle::phase_average(const Poly& P) {
    if (P.empty()) return {};
    const std::size_t M = P.begin()->first.size() / 4;
    Poly R;
    for (const auto& [e, c] : P) {
        long z_deg = 0, w_deg = 0;
        for (std::size_t m = 0; m < M; ++m) {
            z_deg += e[m];
            w_deg += e[M + m];
        }
        if (z_deg == w_deg) add_to(R, e, c);
    }
    return R;
}

ModeOracle::Poly ModeOracle::add(const Poly& A, const Poly& B) {
    Poly R = A;
    for (const auto& [e, c] : B) add_to(R, e, c);
    return R;
}

ModeOracle::Poly ModeOracle::sub(const Poly& A, const Poly& B) {
    Poly R = A;
    for (const auto& [e, c] : B) add_to(R, e, -c);
    return R;
}

bool ModeOracle::equal(const Poly& A, const Poly& B) { return sub(A, B).empty(); }

}  // namespace nf
