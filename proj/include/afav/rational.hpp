#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace afav {

// Exact arbitrary-precision rational, always in lowest terms with a positive
// denominator. Values that fit a word-sized fraction are kept inline; the
// rest live on the heap as a canonical GMP rational. The inline/heap split is
// an invariant, not a cache: a value is heap-backed iff it does not fit
// inline, so equality and hashing never need cross-representation checks.
//
// The inline path covers the integer-valued protocol machines end to end;
// the GMP path carries the base-B membership encodings whose denominators
// grow as B^l.
class Rational {
public:
    Rational() noexcept : num_(0), den_(1), big_(nullptr) {}
    Rational(int64_t n) noexcept : num_(n), den_(1), big_(nullptr) {}
    Rational(int64_t num, int64_t den);
    Rational(const mpz_class& num, const mpz_class& den);

    Rational(const Rational& o);
    Rational(Rational&& o) noexcept : num_(o.num_), den_(o.den_), big_(o.big_) { o.big_ = nullptr; }
    Rational& operator=(const Rational& o);
    Rational& operator=(Rational&& o) noexcept;
    ~Rational();

    // Parses the scalar text syntax: optional sign, digits, optional "/" and
    // digits (e.g. "-31", "283/100"). Decimal points are rejected.
    static Rational parse(std::string_view text);

    static Rational pow(const Rational& base, uint64_t exp);

    bool is_zero() const { return big_ == nullptr && num_ == 0; }
    bool is_integer() const;
    int sign() const;

    Rational operator-() const;
    Rational abs() const;

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

    bool operator==(const Rational& o) const;
    std::strong_ordering operator<=>(const Rational& o) const;

    // "7", "-3/4"; always the canonical form.
    std::string str() const;
    // Fixed-point decimal truncated toward zero, e.g. decimal(10) of 155/1004
    // is "0.1543824701". Exact integer arithmetic; digits >= 1.
    std::string decimal(int digits) const;

    // Exact value as a GMP pair (den > 0, lowest terms).
    mpz_class num_mpz() const;
    mpz_class den_mpz() const;

    double to_double() const; // for benchmarks/diagnostics only

    uint64_t hash() const;

    bool fits_small() const { return big_ == nullptr; }

private:
    struct Big; // canonical mpq
    void set_big(Big* b) noexcept;
    static Rational from_i128(__int128 num, __int128 den); // canonical inputs
    void normalize_from_i128(__int128 num, __int128 den);  // raw inputs, den != 0

    int64_t num_;
    int64_t den_;
    Big* big_;
};

inline Rational abs(const Rational& r) { return r.abs(); }

struct RationalHash {
    size_t operator()(const Rational& r) const { return static_cast<size_t>(r.hash()); }
};

} // namespace afav
