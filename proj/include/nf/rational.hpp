#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nf {

/// Raised when an operation's stated precondition is violated
/// (division by zero, L_h^{-1} on a charge-0 term, ...).
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Arbitrary-precision signed integer, sign-magnitude with base-2^32 limbs.
/// Coefficients in the normal-form recursion stay small, but nothing here
/// caps their growth, so the representation is unbounded.
class BigInt {
  public:
    BigInt() = default;
    BigInt(long long v);
    static BigInt from_string(std::string_view s);

    bool is_zero() const { return sign_ == 0; }
    bool is_one() const;
    bool is_negative() const { return sign_ < 0; }
    int sign() const { return sign_; }

    BigInt operator-() const;
    BigInt abs() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);
    /// Truncated quotient and remainder, remainder has the dividend's sign.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
    friend BigInt operator/(const BigInt& a, const BigInt& b);
    friend BigInt operator%(const BigInt& a, const BigInt& b);

    static BigInt gcd(BigInt a, BigInt b);

    friend bool operator==(const BigInt& a, const BigInt& b);
    friend bool operator<(const BigInt& a, const BigInt& b);
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

    std::string to_string() const;
    double to_double() const;

  private:
    int sign_ = 0;                  // -1, 0, +1
    std::vector<uint32_t> mag_;     // little-endian limbs, no trailing zeros
    void trim();
    static int cmp_mag(const BigInt& a, const BigInt& b);
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>&, const std::vector<uint32_t>&);
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>&, const std::vector<uint32_t>&);
};

/// Exact rational number, always normalized: gcd(num, den) = 1, den > 0.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d);
    Rational(BigInt n, BigInt d);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_.is_one(); }

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b);
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);

    /// "p/q", or "p" when q = 1.
    std::string to_string() const;
    static Rational from_string(std::string_view s);
    double to_double() const;

  private:
    BigInt num_, den_;
    void normalize();
};

/// Gaussian rational re + i*im.  All symbolic coefficients live here; the
/// module never touches floating point.
struct ExactComplex {
    Rational re, im;

    ExactComplex() = default;
    ExactComplex(Rational r) : re(std::move(r)) {}
    ExactComplex(long long r) : re(r) {}
    ExactComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static ExactComplex i() { return {Rational(0), Rational(1)}; }
    /// i/n for the L_h^{-1} multiplier.
    static ExactComplex i_over(long long n) { return {Rational(0), Rational(1, n)}; }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    ExactComplex conj() const { return {re, -im}; }
    ExactComplex operator-() const { return {-re, -im}; }

    friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b);
    ExactComplex& operator+=(const ExactComplex& o) { return *this = *this + o; }
    ExactComplex& operator-=(const ExactComplex& o) { return *this = *this - o; }
    ExactComplex& operator*=(const ExactComplex& o) { return *this = *this * o; }

    friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const ExactComplex& a, const ExactComplex& b) { return !(a == b); }

    /// Compact form: "3/4", "i/16", "-1/8+i/4", "0".
    std::string to_string() const;
};

}  // namespace nf
