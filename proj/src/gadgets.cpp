#include "afav/gadgets.hpp"

#include <sstream>

namespace afav {

PolynomialSpec::PolynomialSpec(std::vector<int64_t> coeffs) : coefficients(std::move(coeffs)) {
    while (!coefficients.empty() && coefficients.back() == 0) coefficients.pop_back();
    if (coefficients.size() < 3)
        raise(ErrorKind::Parameter, "polynomial must be non-linear (degree >= 2)");
    for (int64_t c : coefficients)
        if (c < 0) raise(ErrorKind::Parameter, "polynomial coefficients must be non-negative");
}

PolynomialSpec PolynomialSpec::parse(std::string_view comma_separated) {
    std::vector<int64_t> coeffs;
    std::string token;
    std::istringstream in{std::string(comma_separated)};
    while (std::getline(in, token, ',')) {
        try {
            size_t used = 0;
            long long v = std::stoll(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            coeffs.push_back(v);
        } catch (...) {
            raise(ErrorKind::Parameter, "invalid polynomial coefficient '" + token + "'");
        }
    }
    return PolynomialSpec(std::move(coeffs));
}

mpz_class PolynomialSpec::evaluate(uint64_t x) const {
    mpz_class acc = 0;
    mpz_class xv(static_cast<unsigned long>(x));
    for (size_t j = coefficients.size(); j-- > 0;) acc = acc * xv + coefficients[j];
    return acc;
}

std::string PolynomialSpec::str() const {
    std::string out;
    for (size_t j = coefficients.size(); j-- > 0;) {
        if (coefficients[j] == 0) continue;
        if (!out.empty()) out += "+";
        if (coefficients[j] != 1 || j == 0) out += std::to_string(coefficients[j]);
        if (j >= 1) out += "x";
        if (j >= 2) out += "^" + std::to_string(j);
    }
    return out.empty() ? "0" : out;
}

namespace {

using R = Rational;
using Op = AffineOperator<Rational>;
using Vec = AffineVector<Rational>;

} // namespace

Gadget binary_encoding() {
    Gadget g;
    g.initial = Vec{R(1), R(0), R(0)};
    g.operators.emplace_back("A0", Op::from_rows({{R(1), R(0), R(0)},
                                                  {R(0), R(2), R(0)},
                                                  {R(0), R(-1), R(1)}}));
    g.operators.emplace_back("A1", Op::from_rows({{R(1), R(0), R(0)},
                                                  {R(1), R(2), R(0)},
                                                  {R(-1), R(-1), R(1)}}));
    g.value_index = 1;
    return g;
}

Gadget counting_method1() {
    Gadget g;
    g.initial = Vec{R(1), R(0), R(0)};
    g.operators.emplace_back("A", Op::from_rows({{R(1), R(0), R(0)},
                                                 {R(1), R(1), R(0)},
                                                 {R(-1), R(0), R(1)}}));
    g.value_index = 1;
    return g;
}

Gadget counting_method2() {
    Gadget g;
    g.initial = Vec{R(1), R(0)};
    g.operators.emplace_back("B", Op::from_rows({{R(0), R(-1)}, {R(1), R(2)}}));
    g.value_index = 1;
    return g;
}

const char* square_variant_name(SquareVariant v) {
    switch (v) {
        case SquareVariant::Tensor: return "tensor";
        case SquareVariant::Dim4: return "dim4";
        case SquareVariant::Dim4Alt: return "dim4alt";
        case SquareVariant::Dim3: return "dim3";
    }
    return "?";
}

Gadget square_gadget(SquareVariant variant) {
    Gadget g;
    switch (variant) {
        case SquareVariant::Tensor: {
            Gadget counter = counting_method2();
            const Op& b = counter.operators[0].second;
            g.initial = tensor(counter.initial, counter.initial);
            g.operators.emplace_back("BxB", tensor(b, b));
            g.value_index = 3;
            return g;
        }
        case SquareVariant::Dim4:
            g.initial = Vec{R(1), R(0), R(0), R(0)};
            g.operators.emplace_back("Q", Op::from_rows({{R(1), R(0), R(0), R(0)},
                                                         {R(1), R(1), R(0), R(0)},
                                                         {R(1), R(2), R(1), R(0)},
                                                         {R(-2), R(-2), R(0), R(1)}}));
            g.value_index = 2;
            return g;
        case SquareVariant::Dim4Alt:
            g.initial = Vec{R(1), R(0), R(0), R(0)};
            g.operators.emplace_back("Q", Op::from_rows({{R(1), R(0), R(0), R(0)},
                                                         {R(2), R(1), R(0), R(0)},
                                                         {R(1), R(1), R(1), R(0)},
                                                         {R(-3), R(-1), R(0), R(1)}}));
            g.value_index = 2;
            return g;
        case SquareVariant::Dim3:
            g.initial = Vec{R(1), R(0), R(0)};
            g.operators.emplace_back("Q", Op::from_rows({{R(-1), R(-4), R(-2)},
                                                         {R(1), R(2), R(1)},
                                                         {R(1), R(3), R(2)}}));
            g.value_index = 2;
            return g;
    }
    raise(ErrorKind::Parameter, "unknown square variant");
}

std::pair<Op, Op> polynomial_step_factors(const PolynomialSpec& p) {
    const size_t d = p.degree();
    const size_t n = d + 3;
    const size_t p_idx = d + 1;
    const size_t bal_idx = d + 2;

    // Binomial coefficients C(j, r) for j <= d, Pascal recurrence.
    std::vector<std::vector<mpz_class>> binom(d + 1, std::vector<mpz_class>(d + 1, 0));
    for (size_t j = 0; j <= d; ++j) {
        binom[j][0] = 1;
        for (size_t r = 1; r <= j; ++r)
            binom[j][r] = binom[j - 1][r - 1] + (r <= j - 1 ? binom[j - 1][r] : mpz_class(0));
    }

    // Power update: entry for x^j becomes sum_r C(j,r) x^r; P passes through;
    // the balance row completes every column to sum 1.
    Op pascal(n);
    for (size_t j = 0; j <= d; ++j)
        for (size_t r = 0; r <= j; ++r) pascal.at(j, r) = R(binom[j][r], mpz_class(1));
    pascal.at(p_idx, p_idx) = R(1);
    pascal.at(bal_idx, bal_idx) = R(1);
    for (size_t c = 0; c <= d; ++c) {
        R colsum(0);
        for (size_t rr = 0; rr <= d; ++rr) colsum += pascal.at(rr, c);
        pascal.at(bal_idx, c) = R(1) - colsum;
    }

    // Coefficient combination: P := sum_j c_j * (power entry j), discarding
    // the previous P value, with the balance row again completing columns.
    Op combine(n);
    for (size_t j = 0; j <= d; ++j) combine.at(j, j) = R(1);
    for (size_t j = 0; j <= d; ++j) combine.at(p_idx, j) = R(p.coefficients[j]);
    for (size_t j = 0; j <= d; ++j) combine.at(bal_idx, j) = R(-p.coefficients[j]);
    combine.at(bal_idx, p_idx) = R(1);
    combine.at(bal_idx, bal_idx) = R(1);

    return {std::move(pascal), std::move(combine)};
}

Gadget polynomial_gadget(const PolynomialSpec& p) {
    auto [pascal, combine] = polynomial_step_factors(p);
    const size_t d = p.degree();
    Gadget g;
    std::vector<R> init(d + 3, R(0));
    init[0] = R(1);
    init[d + 1] = R(p.coefficients[0]);
    init[d + 2] = R(-p.coefficients[0]);
    g.initial = Vec(std::move(init));
    g.operators.emplace_back("P", compose(combine, pascal));
    g.value_index = d + 1;
    return g;
}

} // namespace afav
