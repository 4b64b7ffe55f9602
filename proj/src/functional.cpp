#include "nf/functional.hpp"

#include <algorithm>
#include <numeric>

namespace nf {

const char* label_name(FieldLabel f) {
    switch (f) {
        case FieldLabel::psi: return "psi";
        case FieldLabel::psi_star: return "psi*";
        case FieldLabel::phi: return "phi";
        case FieldLabel::pphi: return "pphi";
    }
    return "?";
}

KVar kvar(int i, int j) {
    if (i > j) std::swap(i, j);
    return static_cast<KVar>((i << 8) | j);
}
int kvar_lo(KVar v) { return v >> 8; }
int kvar_hi(KVar v) { return v & 0xff; }

// ------------------------------------------------------------------ KPoly

KPoly KPoly::one() {
    KPoly p;
    p.mono_[{}] = ExactComplex(1);
    return p;
}

KPoly KPoly::var(int i, int j) {
    KPoly p;
    p.mono_[{kvar(i, j)}] = ExactComplex(1);
    return p;
}

KPoly KPoly::constant(ExactComplex c) {
    KPoly p;
    if (!c.is_zero()) p.mono_[{}] = std::move(c);
    return p;
}

bool KPoly::is_one() const {
    return mono_.size() == 1 && mono_.begin()->first.empty() &&
           mono_.begin()->second == ExactComplex(1);
}

void KPoly::add(Monomial m, const ExactComplex& c) {
    if (c.is_zero()) return;
    auto it = mono_.find(m);
    if (it == mono_.end()) {
        mono_.emplace(std::move(m), c);
    } else {
        it->second += c;
        if (it->second.is_zero()) mono_.erase(it);
    }
}

KPoly operator+(const KPoly& a, const KPoly& b) {
    KPoly r = a;
    for (const auto& [m, c] : b.mono_) r.add(m, c);
    return r;
}

KPoly operator-(const KPoly& a, const KPoly& b) {
    KPoly r = a;
    for (const auto& [m, c] : b.mono_) r.add(m, -c);
    return r;
}

KPoly operator*(const KPoly& a, const KPoly& b) {
    KPoly r;
    for (const auto& [ma, ca] : a.mono_) {
        for (const auto& [mb, cb] : b.mono_) {
            KPoly::Monomial m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            std::sort(m.begin(), m.end());
            r.add(std::move(m), ca * cb);
        }
    }
    return r;
}

KPoly KPoly::scaled(const ExactComplex& c) const {
    KPoly r;
    if (c.is_zero()) return r;
    for (const auto& [m, mc] : mono_) r.mono_[m] = mc * c;
    return r;
}

KPoly KPoly::substitute_momentum(int t, const std::vector<std::pair<long long, int>>& repl) const {
    KPoly result;
    for (const auto& [m, c] : mono_) {
        KPoly acc = KPoly::constant(c);
        Monomial untouched;
        for (KVar v : m) {
            int i = kvar_lo(v), j = kvar_hi(v);
            if (i != t && j != t) {
                untouched.push_back(v);
                continue;
            }
            KPoly expanded;
            if (i == t && j == t) {
                // d(t,t) -> sum_{a,b} ca*cb d(a,b)
                for (const auto& [ca, a] : repl) {
                    for (const auto& [cb, b] : repl) {
                        expanded.add({kvar(a, b)}, ExactComplex(ca * cb));
                    }
                }
            } else {
                int other = (i == t) ? j : i;
                for (const auto& [ca, a] : repl) {
                    expanded.add({kvar(other, a)}, ExactComplex(ca));
                }
            }
            acc = acc * expanded;
        }
        if (!untouched.empty()) {
            std::sort(untouched.begin(), untouched.end());
            KPoly shell;
            shell.mono_[untouched] = ExactComplex(1);
            acc = acc * shell;
        }
        result = result + acc;
    }
    return result;
}

KPoly KPoly::renamed(const std::map<int, int>& rename) const {
    KPoly r;
    for (const auto& [m, c] : mono_) {
        Monomial nm;
        nm.reserve(m.size());
        for (KVar v : m) {
            int i = kvar_lo(v), j = kvar_hi(v);
            auto it = rename.find(i);
            if (it != rename.end()) i = it->second;
            it = rename.find(j);
            if (it != rename.end()) j = it->second;
            nm.push_back(kvar(i, j));
        }
        std::sort(nm.begin(), nm.end());
        r.add(std::move(nm), c);
    }
    return r;
}

ExactComplex KPoly::evaluate(const std::map<KVar, Rational>& dots) const {
    ExactComplex total;
    for (const auto& [m, c] : mono_) {
        ExactComplex v = c;
        for (KVar var : m) {
            auto it = dots.find(var);
            Rational d = (it == dots.end()) ? Rational(0) : it->second;
            v = v * ExactComplex(d);
        }
        total += v;
    }
    return total;
}

static int cmp_complex(const ExactComplex& a, const ExactComplex& b) {
    if (a.re != b.re) return a.re < b.re ? -1 : 1;
    if (a.im != b.im) return a.im < b.im ? -1 : 1;
    return 0;
}

int KPoly::compare(const KPoly& a, const KPoly& b) {
    auto ia = a.mono_.begin(), ib = b.mono_.begin();
    for (; ia != a.mono_.end() && ib != b.mono_.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
        int c = cmp_complex(ia->second, ib->second);
        if (c != 0) return c;
    }
    if (ia != a.mono_.end()) return 1;
    if (ib != b.mono_.end()) return -1;
    return 0;
}

int KPoly::max_momentum_index() const {
    int mx = 0;
    for (const auto& [m, c] : mono_)
        for (KVar v : m) mx = std::max(mx, kvar_hi(v));
    return mx;
}

// ------------------------------------------------------------------- Term

int Term::charge() const {
    int n = 0;
    for (const auto& f : factors) {
        if (f.field == FieldLabel::psi) ++n;
        if (f.field == FieldLabel::psi_star) --n;
    }
    return n;
}

int Term::degree(FieldLabel lbl) const {
    int n = 0;
    for (const auto& f : factors)
        if (f.field == lbl) ++n;
    return n;
}

int Term::compare_structure(const Term& a, const Term& b) {
    if (a.factors.size() != b.factors.size())
        return a.factors.size() < b.factors.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.factors.size(); ++i) {
        if (a.factors[i].field != b.factors[i].field)
            return a.factors[i].field < b.factors[i].field ? -1 : 1;
    }
    return 0;
}

// --------------------------------------------------------- canonical form

namespace {

// Reduce modulo momentum conservation: eliminate symbol m via
// k_m := -(k_1 + ... + k_{m-1}).  For m = 1 conservation forces k_1 = 0.
KPoly reduce_conservation(const KPoly& k, int m) {
    if (k.max_momentum_index() < m && m > 1) return k;
    if (m == 0) return k;
    if (m == 1) {
        // only the constant part survives
        KPoly r;
        for (const auto& [mono, c] : k.monomials())
            if (mono.empty()) r.add(mono, c);
        return r;
    }
    std::vector<std::pair<long long, int>> repl;
    repl.reserve(m - 1);
    for (int j = 1; j < m; ++j) repl.push_back({-1, j});
    return k.substitute_momentum(m, repl);
}

// All permutations of positions 1..m that only permute equal labels,
// returned as maps old -> new.
void label_permutations(const std::vector<Factor>& sorted, std::vector<std::map<int, int>>& out) {
    const int m = static_cast<int>(sorted.size());
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (int i = 0; i < m; ++i)
            if (sorted[perm[i]].field != sorted[i].field) {
                ok = false;
                break;
            }
        if (!ok) continue;
        std::map<int, int> rename;
        for (int i = 0; i < m; ++i)
            if (perm[i] != i) rename[i + 1] = perm[i] + 1;
        out.push_back(std::move(rename));
    } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

std::optional<Term> canonicalize_term(const ExactComplex& coeff, std::vector<Factor> factors,
                                      const KPoly& kernel) {
    if (coeff.is_zero() || kernel.is_zero()) return std::nullopt;

    std::stable_sort(factors.begin(), factors.end(),
                     [](const Factor& a, const Factor& b) { return a.field < b.field; });
    const int m = static_cast<int>(factors.size());

    // momentum symbols become position indices
    std::map<int, int> rename;
    for (int i = 0; i < m; ++i) {
        rename[factors[i].momentum] = i + 1;
        factors[i].momentum = i + 1;
    }
    KPoly k = kernel.renamed(rename);

    // symmetrize over identical labels, re-reducing each permuted image
    std::vector<std::map<int, int>> perms;
    label_permutations(factors, perms);
    KPoly sym;
    for (const auto& p : perms) sym = sym + reduce_conservation(k.renamed(p), m);
    sym = sym.scaled(ExactComplex(Rational(1, static_cast<long long>(perms.size()))));

    if (sym.is_zero()) return std::nullopt;

    Term t;
    t.coeff = coeff;
    t.factors = std::move(factors);
    t.kernel = std::move(sym);
    return t;
}

Functional merge_canonical(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return Term::compare_structure(a, b) < 0; });
    // terms with the same factor multiset live in one kernel-polynomial
    // space; sum them there, then pull the leading coefficient back out so
    // equal functionals have bit-identical representations
    std::vector<Term> merged;
    for (auto& t : terms) {
        KPoly weighted = t.kernel.scaled(t.coeff);
        if (!merged.empty() && Term::compare_structure(merged.back(), t) == 0) {
            merged.back().kernel = merged.back().kernel + weighted;
        } else {
            t.kernel = std::move(weighted);
            t.coeff = ExactComplex(1);
            merged.push_back(std::move(t));
        }
    }
    std::vector<Term> result;
    for (auto& t : merged) {
        if (t.kernel.is_zero()) continue;
        ExactComplex lead = t.kernel.monomials().begin()->second;
        t.coeff = lead;
        t.kernel = t.kernel.scaled(ExactComplex(1) / lead);
        result.push_back(std::move(t));
    }
    return Functional(std::move(result));
}

Functional make_functional(const std::vector<RawTerm>& raw) {
    std::vector<Term> canon;
    canon.reserve(raw.size());
    for (const auto& rt : raw) {
        if (auto t = canonicalize_term(rt.coeff, rt.factors, rt.kernel)) canon.push_back(std::move(*t));
    }
    return merge_canonical(std::move(canon));
}

// ------------------------------------------------------------- Functional

Functional operator+(const Functional& a, const Functional& b) {
    std::vector<Term> all = a.terms_;
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    return merge_canonical(std::move(all));
}

Functional operator-(const Functional& a, const Functional& b) {
    return a + b.scaled(ExactComplex(-1));
}

Functional Functional::scaled(const ExactComplex& c) const {
    if (c.is_zero()) return {};
    std::vector<Term> scaled_terms = terms_;
    for (auto& t : scaled_terms) t.coeff *= c;
    return Functional(std::move(scaled_terms));
}

bool operator==(const Functional& a, const Functional& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (Term::compare_structure(a.terms_[i], b.terms_[i]) != 0) return false;
        if (!(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
    }
    return true;
}

}  // namespace nf
