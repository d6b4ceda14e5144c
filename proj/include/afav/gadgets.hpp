#pragma once

#include <string>
#include <utility>
#include <vector>

#include "afav/affine.hpp"

namespace afav {

// Non-linear polynomial with non-negative integer coefficients, c_0..c_d.
// Trailing zero coefficients are stripped at construction; the resulting
// degree must be at least 2.
struct PolynomialSpec {
    std::vector<int64_t> coefficients;

    explicit PolynomialSpec(std::vector<int64_t> coeffs);
    static PolynomialSpec parse(std::string_view comma_separated);

    size_t degree() const { return coefficients.size() - 1; }
    mpz_class evaluate(uint64_t x) const;
    std::string str() const; // e.g. "2x^3+x"
};

// One encoding technique: an initial affine vector, the per-symbol
// operator(s), and the entry that carries the encoded value after each step.
struct Gadget {
    AffineVector<Rational> initial;
    std::vector<std::pair<std::string, AffineOperator<Rational>>> operators;
    size_t value_index = 0; // 0-based entry holding the designated value
};

// Binary value tracker: initial (1,0,0); reading w through A_0/A_1 leaves
// (1, val(w), -val(w)).
Gadget binary_encoding();

// Unary counters: after l steps, (1, l, -l) and (1-l, l) respectively.
Gadget counting_method1();
Gadget counting_method2();

// Square trackers: after l steps the designated entry equals l^2.
//   Tensor  - 2x2 counter tensored with itself, value in e_4
//   Dim4    - state (1, i, i^2, -i-i^2), value in e_3
//   Dim4Alt - state (1, 2i, i^2, -2i-i^2), value in e_3
//   Dim3    - state (1-i-i^2, i, i^2), value in e_3
enum class SquareVariant { Tensor, Dim4, Dim4Alt, Dim3 };
Gadget square_gadget(SquareVariant variant);
const char* square_variant_name(SquareVariant v);

// Polynomial tracker of dimension d+3 with entry layout
// (1, x, x^2, ..., x^d, P, balance). The step operator is the exact product
// of two column-sum-1 matrices: a Pascal update of the power entries followed
// by a coefficient combination writing P(i+1). Starting from
// (1, 0, ..., 0, P(0), -P(0)), l steps reach (1, l, ..., l^d, P(l), bal).
Gadget polynomial_gadget(const PolynomialSpec& p);

// The two factors of the polynomial step, exposed for validation.
std::pair<AffineOperator<Rational>, AffineOperator<Rational>> polynomial_step_factors(
    const PolynomialSpec& p);

} // namespace afav
