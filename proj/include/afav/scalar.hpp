#pragma once

#include "afav/interval.hpp"
#include "afav/rational.hpp"

namespace afav {

// The two scalar modes of the workbench: exact rationals for rational-valued
// machines, rational intervals for machines carrying a truncated real entry.
// Templates over the scalar use only these overloads plus +,-,*.

// --- exact mode ------------------------------------------------------------

inline bool scalar_contains_one(const Rational& s) { return s == Rational(1); }
inline bool scalar_l1_at_least_one(const Rational& l1) { return l1 >= Rational(1); }
inline Rational scalar_weight_div(const Rational& num, const Rational& den) { return num / den; }

inline bool certainly_ge(const Rational& s, const Rational& bound) { return s >= bound; }
inline bool certainly_le(const Rational& s, const Rational& bound) { return s <= bound; }
inline bool possibly_ge(const Rational& s, const Rational& bound) { return s >= bound; }

// Largest attainable value of max over a set folded pairwise.
inline Rational max_hull(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline bool abs_at_least(const Rational& s, const Rational& bound) { return s.abs() >= bound; }

inline std::string scalar_str(const Rational& s) { return s.str(); }
inline uint64_t scalar_hash(const Rational& s) { return s.hash(); }

// Total order used for canonical/dedup comparisons.
inline bool scalar_before(const Rational& a, const Rational& b) { return a < b; }

// --- interval mode ----------------------------------------------------------

inline bool scalar_contains_one(const RationalInterval& s) { return s.contains(Rational(1)); }
inline bool scalar_l1_at_least_one(const RationalInterval& l1) { return l1.hi() >= Rational(1); }
inline RationalInterval scalar_weight_div(const RationalInterval& num, const RationalInterval& den) {
    return num / den;
}

inline bool certainly_ge(const RationalInterval& s, const Rational& bound) { return s.lo() >= bound; }
inline bool certainly_le(const RationalInterval& s, const Rational& bound) { return s.hi() <= bound; }
inline bool possibly_ge(const RationalInterval& s, const Rational& bound) { return s.hi() >= bound; }

inline RationalInterval max_hull(const RationalInterval& a, const RationalInterval& b) {
    return RationalInterval(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

inline bool abs_at_least(const RationalInterval& s, const Rational& bound) {
    return s.abs().lo() >= bound;
}

inline std::string scalar_str(const RationalInterval& s) { return s.str(); }
inline uint64_t scalar_hash(const RationalInterval& s) { return s.hash(); }

inline bool scalar_before(const RationalInterval& a, const RationalInterval& b) {
    if (a.lo() != b.lo()) return a.lo() < b.lo();
    return a.hi() < b.hi();
}

} // namespace afav
