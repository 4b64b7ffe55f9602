#include "nf/parse.hpp"

#include <cctype>

namespace nf {

namespace {

// A sum of not-yet-integrated monomials.  Momentum ids inside each piece are
// dense 1..n; products rename the right operand's ids past the left's.
struct Pieces {
    std::vector<RawTerm> v;

    static Pieces scalar(const ExactComplex& c) {
        Pieces p;
        p.v.push_back({c, {}, KPoly::one()});
        return p;
    }
};

Pieces operator+(const Pieces& a, const Pieces& b) {
    Pieces r = a;
    r.v.insert(r.v.end(), b.v.begin(), b.v.end());
    return r;
}

Pieces operator*(const Pieces& a, const Pieces& b) {
    Pieces r;
    for (const auto& ta : a.v) {
        const int off = static_cast<int>(ta.factors.size());
        for (const auto& tb : b.v) {
            RawTerm t;
            t.coeff = ta.coeff * tb.coeff;
            t.factors = ta.factors;
            std::map<int, int> shift;
            for (std::size_t j = 0; j < tb.factors.size(); ++j) {
                shift[tb.factors[j].momentum] = off + static_cast<int>(j) + 1;
                t.factors.push_back({tb.factors[j].field, off + static_cast<int>(j) + 1});
            }
            t.kernel = ta.kernel * tb.kernel.renamed(shift);
            r.v.push_back(std::move(t));
        }
    }
    return r;
}

class Parser {
  public:
    explicit Parser(std::string_view s) : s_(s) {}

    Functional parse() {
        std::vector<RawTerm> raw;
        skip_ws();
        bool negative = consume_sign();
        for (;;) {
            parse_addend(raw, negative);
            skip_ws();
            if (pos_ >= s_.size()) break;
            if (s_[pos_] == '+') {
                ++pos_;
                negative = false;
            } else if (s_[pos_] == '-') {
                ++pos_;
                negative = true;
            } else {
                fail("expected '+' or '-'");
            }
        }
        return make_functional(raw);
    }

  private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool consume_sign() {
        skip_ws();
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
            return s_[pos_++] == '-';
        }
        return false;
    }

    bool lookahead(std::string_view word) const {
        return s_.substr(pos_, word.size()) == word;
    }

    bool consume(std::string_view word) {
        skip_ws();
        if (lookahead(word)) {
            pos_ += word.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view word) {
        if (!consume(word)) fail(std::string("expected '") + std::string(word) + "'");
    }

    // one coefficient * ... * int[...] group
    void parse_addend(std::vector<RawTerm>& out, bool negative) {
        ExactComplex c(negative ? -1 : 1);
        for (;;) {
            skip_ws();
            if (consume("int[")) {
                Pieces body = parse_sum();
                expect("]");
                for (auto& t : body.v) {
                    t.coeff *= c;
                    out.push_back(std::move(t));
                }
                return;
            }
            if (pos_ < s_.size() && s_[pos_] == '(') {
                ++pos_;
                bool neg = consume_sign();
                ExactComplex v = parse_coefficient();
                if (neg) v = -v;
                expect(")");
                c *= v;
                consume("*");
                continue;
            }
            if (at_coefficient()) {
                c *= parse_coefficient();
                consume("*");
                continue;
            }
            fail("expected coefficient or 'int['");
        }
    }

    Pieces parse_sum() {
        bool neg = consume_sign();
        Pieces acc = parse_product(neg);
        for (;;) {
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '+') {
                ++pos_;
                acc = acc + parse_product(false);
            } else if (pos_ < s_.size() && s_[pos_] == '-') {
                ++pos_;
                acc = acc + parse_product(true);
            } else {
                return acc;
            }
        }
    }

    Pieces parse_product(bool negative) {
        Pieces acc = Pieces::scalar(ExactComplex(negative ? -1 : 1));
        bool first = true;
        for (;;) {
            skip_ws();
            if (pos_ >= s_.size() || s_[pos_] == ']' || s_[pos_] == ')' || s_[pos_] == '+' ||
                s_[pos_] == '-') {
                if (first) fail("empty product");
                return acc;
            }
            consume("*");
            acc = acc * parse_power();
            first = false;
        }
    }

    Pieces parse_power() {
        Pieces base = parse_primary();
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '^') {
            ++pos_;
            long long n = parse_nat();
            Pieces acc = Pieces::scalar(ExactComplex(1));
            for (long long i = 0; i < n; ++i) acc = acc * base;
            return acc;
        }
        return base;
    }

    Pieces parse_primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (consume("lap")) {
            long long n = 1;
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '^') {
                ++pos_;
                n = parse_nat();
            }
            expect("(");
            FieldLabel f = parse_field();
            expect(")");
            Pieces p;
            KPoly k = KPoly::one();
            const KPoly minus_d11 = KPoly::var(1, 1).scaled(ExactComplex(-1));
            for (long long i = 0; i < n; ++i) k = k * minus_d11;
            p.v.push_back({ExactComplex(1), {{f, 1}}, k});
            return p;
        }
        if (consume("grad(")) {
            FieldLabel f = parse_field();
            expect(")");
            expect(".");
            expect("grad(");
            FieldLabel g = parse_field();
            expect(")");
            Pieces p;
            p.v.push_back({ExactComplex(1), {{f, 1}, {g, 2}}, KPoly::var(1, 2).scaled(ExactComplex(-1))});
            return p;
        }
        if (lookahead("psi") || lookahead("phi") || lookahead("pphi")) {
            FieldLabel f = parse_field();
            Pieces p;
            p.v.push_back({ExactComplex(1), {{f, 1}}, KPoly::one()});
            return p;
        }
        if (s_[pos_] == '(') {
            ++pos_;
            Pieces inner = parse_sum();
            expect(")");
            return inner;
        }
        if (at_coefficient()) return Pieces::scalar(parse_coefficient());
        fail("expected field, operator or coefficient");
    }

    FieldLabel parse_field() {
        skip_ws();
        if (consume("psi*")) return FieldLabel::psi_star;
        if (consume("psi")) return FieldLabel::psi;
        if (consume("pphi")) return FieldLabel::pphi;
        if (consume("phi")) return FieldLabel::phi;
        fail("expected field name");
    }

    bool at_coefficient() {
        skip_ws();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == 'i') {
            // 'i' must not start an identifier like 'int['
            return !(c == 'i' && lookahead("int["));
        }
        return false;
    }

    long long parse_nat() {
        skip_ws();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            fail("expected number");
        }
        long long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_++] - '0');
        }
        return v;
    }

    // nat ['i'] ['/' nat]  or  'i' ['/' nat]
    ExactComplex parse_coefficient() {
        skip_ws();
        long long numer = 1;
        bool imaginary = false;
        if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) numer = parse_nat();
        if (pos_ < s_.size() && s_[pos_] == 'i') {
            ++pos_;
            imaginary = true;
        }
        long long denom = 1;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            denom = parse_nat();
        }
        Rational q(numer, denom);
        return imaginary ? ExactComplex(Rational(0), q) : ExactComplex(q);
    }
};

}  // namespace

Functional build(std::string_view expression) { return Parser(expression).parse(); }

}  // namespace nf
