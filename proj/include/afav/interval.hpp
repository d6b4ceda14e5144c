#pragma once

#include <string>

#include "afav/rational.hpp"

namespace afav {

// Closed interval with exact rational endpoints. Every operation is
// containment-sound: the result interval covers all pointwise results of
// operands drawn from the input intervals. Endpoints are exact, so soundness
// holds with equality at the edges (no outward rounding is ever needed).
class RationalInterval {
public:
    RationalInterval() : lo_(0), hi_(0) {}
    RationalInterval(Rational point) : lo_(point), hi_(std::move(point)) {}
    RationalInterval(int64_t point) : lo_(point), hi_(point) {}
    RationalInterval(Rational lo, Rational hi);

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }

    bool is_point() const { return lo_ == hi_; }
    Rational width() const { return hi_ - lo_; }
    bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const RationalInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }

    RationalInterval operator-() const { return RationalInterval(-hi_, -lo_); }
    RationalInterval abs() const;

    RationalInterval& operator+=(const RationalInterval& o);
    RationalInterval& operator-=(const RationalInterval& o);
    RationalInterval& operator*=(const RationalInterval& o);
    // Requires the divisor to be strictly positive; an interval containing 0
    // raises a precision error.
    RationalInterval& operator/=(const RationalInterval& o);

    friend RationalInterval operator+(RationalInterval a, const RationalInterval& b) { a += b; return a; }
    friend RationalInterval operator-(RationalInterval a, const RationalInterval& b) { a -= b; return a; }
    friend RationalInterval operator*(RationalInterval a, const RationalInterval& b) { a *= b; return a; }
    friend RationalInterval operator/(RationalInterval a, const RationalInterval& b) { a /= b; return a; }

    // Structural equality (endpoint-wise); used by dedup keys.
    bool operator==(const RationalInterval& o) const { return lo_ == o.lo_ && hi_ == o.hi_; }

    static RationalInterval hull(const RationalInterval& a, const RationalInterval& b);

    std::string str() const; // "[lo,hi]"
    uint64_t hash() const;

private:
    Rational lo_, hi_;
};

inline RationalInterval abs(const RationalInterval& x) { return x.abs(); }

} // namespace afav
