#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nf/rational.hpp"

namespace nf {

/// The four field symbols of the Klein-Gordon-Wave phase space in complex
/// Birkhoff coordinates.  psi/psi_star are conjugate partners under
/// {psi(x), psi*(y)} = -i delta(x-y); phi/pphi are a canonical pair.
enum class FieldLabel : uint8_t { psi = 0, psi_star = 1, phi = 2, pphi = 3 };

const char* label_name(FieldLabel f);

/// One field occurrence inside an integral monomial.  The momentum is a
/// formal symbol: the plane-wave exponent carried by this factor, oriented
/// so that momentum conservation reads sum_i k_i = 0 without signs.
struct Factor {
    FieldLabel field;
    int momentum;  // 1-based symbol id; equals the position index in canonical terms
};

/// Variable id for the formal dot product k_i . k_j, i <= j.
using KVar = uint16_t;
KVar kvar(int i, int j);
int kvar_lo(KVar v);
int kvar_hi(KVar v);

/// Polynomial with ExactComplex coefficients in the pairwise dot products of
/// the factors' formal momenta.  Derivative structure is encoded here:
/// a Laplacian on factor i contributes -d(i,i), a gradient pairing between
/// factors i and j contributes -d(i,j).
class KPoly {
  public:
    using Monomial = std::vector<KVar>;  // sorted, with repetition

    static KPoly zero() { return {}; }
    static KPoly one();
    static KPoly var(int i, int j);
    static KPoly constant(ExactComplex c);

    bool is_zero() const { return mono_.empty(); }
    bool is_one() const;
    const std::map<Monomial, ExactComplex>& monomials() const { return mono_; }

    void add(Monomial m, const ExactComplex& c);
    friend KPoly operator+(const KPoly& a, const KPoly& b);
    friend KPoly operator-(const KPoly& a, const KPoly& b);
    friend KPoly operator*(const KPoly& a, const KPoly& b);
    KPoly scaled(const ExactComplex& c) const;

    /// Substitute the momentum symbol t by sum_j coeff_j * k_j.
    /// Every dot product involving t is expanded; t must not appear in repl.
    KPoly substitute_momentum(int t, const std::vector<std::pair<long long, int>>& repl) const;

    /// Apply a momentum-symbol renaming to every variable.
    KPoly renamed(const std::map<int, int>& rename) const;

    /// Numeric evaluation with dot(i,j) supplied by the caller (exact).
    ExactComplex evaluate(const std::map<KVar, Rational>& dots) const;

    /// Total order for canonical term sorting (compares structure and coefficients).
    static int compare(const KPoly& a, const KPoly& b);
    friend bool operator==(const KPoly& a, const KPoly& b) { return compare(a, b) == 0; }

    int max_momentum_index() const;

  private:
    std::map<Monomial, ExactComplex> mono_;
};

/// One integral monomial: exact coefficient x ordered field factors x
/// momentum kernel.  Canonical form: factors sorted by label, factor i
/// carrying momentum symbol i, kernel reduced modulo momentum conservation
/// (the highest symbol eliminated), symmetrized over permutations of
/// identical labels, and normalized so its leading monomial has unit
/// coefficient (the scalar lives in coeff).
struct Term {
    ExactComplex coeff;
    std::vector<Factor> factors;
    KPoly kernel;

    int charge() const;              // (#psi) - (#psi_star)
    int degree(FieldLabel f) const;  // factor count with this label
    /// Structural comparison ignoring coeff; the merge key of a Functional.
    static int compare_structure(const Term& a, const Term& b);
};

/// Exact-coefficient sum of integral monomials in psi, psi*, phi, p_phi.
/// Representation is unique, so equality is structural.
class Functional {
  public:
    Functional() = default;
    explicit Functional(std::vector<Term> canonical_terms) : terms_(std::move(canonical_terms)) {}

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    friend Functional operator+(const Functional& a, const Functional& b);
    friend Functional operator-(const Functional& a, const Functional& b);
    Functional scaled(const ExactComplex& c) const;
    Functional& operator+=(const Functional& o) { return *this = *this + o; }
    Functional& operator-=(const Functional& o) { return *this = *this - o; }

    friend bool operator==(const Functional& a, const Functional& b);
    friend bool operator!=(const Functional& a, const Functional& b) { return !(a == b); }

  private:
    std::vector<Term> terms_;
};

/// Canonicalize one raw integral monomial.  `factors` may carry arbitrary
/// distinct momentum ids matching the kernel's variables; momentum
/// conservation over all factors is implicit.  Returns nullopt if the term
/// vanishes (zero coefficient or kernel killed by conservation).
std::optional<Term> canonicalize_term(const ExactComplex& coeff, std::vector<Factor> factors,
                                      const KPoly& kernel);

/// Assemble a Functional from raw (coeff, factors, kernel) triples,
/// canonicalizing, sorting and merging.
struct RawTerm {
    ExactComplex coeff;
    std::vector<Factor> factors;
    KPoly kernel;
};
Functional make_functional(const std::vector<RawTerm>& raw);

/// Merge a list of already-canonical terms (sort + combine + drop zeros).
Functional merge_canonical(std::vector<Term> terms);

}  // namespace nf
