#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "afav/error.hpp"
#include "afav/scalar.hpp"

namespace afav {

// Affine state: entries sum to 1 exactly (interval mode: the sum interval
// contains 1). Entries may be negative; that is the whole point.
template <class S>
struct AffineVector {
    std::vector<S> entries;

    AffineVector() = default;
    explicit AffineVector(std::vector<S> e) : entries(std::move(e)) {}
    AffineVector(std::initializer_list<S> e) : entries(e) {}

    size_t dim() const { return entries.size(); }
    const S& operator[](size_t i) const { return entries[i]; }
    S& operator[](size_t i) { return entries[i]; }

    S entry_sum() const {
        S acc = entries.empty() ? S(0) : entries[0];
        for (size_t i = 1; i < entries.size(); ++i) acc += entries[i];
        return acc;
    }

    S l1_norm() const {
        S acc(0);
        for (const S& e : entries) acc += abs(e);
        return acc;
    }

    bool operator==(const AffineVector& o) const { return entries == o.entries; }
};

// Affine operator: square matrix with every column summing to 1 (interval
// mode: each column sum contains 1). Stored row-major.
template <class S>
struct AffineOperator {
    size_t dim = 0;
    std::vector<S> a; // dim*dim, row-major

    AffineOperator() = default;
    explicit AffineOperator(size_t n) : dim(n), a(n * n, S(0)) {}

    static AffineOperator identity(size_t n) {
        AffineOperator m(n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = S(1);
        return m;
    }

    static AffineOperator from_rows(std::initializer_list<std::initializer_list<S>> rows) {
        AffineOperator m(rows.size());
        size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != m.dim)
                raise(ErrorKind::Structural, "operator rows must form a square matrix");
            size_t j = 0;
            for (const S& v : row) m.at(i, j++) = v;
            ++i;
        }
        return m;
    }

    S& at(size_t row, size_t col) { return a[row * dim + col]; }
    const S& at(size_t row, size_t col) const { return a[row * dim + col]; }

    S column_sum(size_t col) const {
        S acc(0);
        for (size_t r = 0; r < dim; ++r) acc += at(r, col);
        return acc;
    }

    bool operator==(const AffineOperator& o) const { return dim == o.dim && a == o.a; }
};

// True iff every column sums to 1 (contains 1 in interval mode).
template <class S>
bool validate_operator(const AffineOperator<S>& m) {
    if (m.dim == 0) return false;
    for (size_t c = 0; c < m.dim; ++c)
        if (!scalar_contains_one(m.column_sum(c))) return false;
    return true;
}

// First column (if any) whose sum is not 1; 0-based, or -1 when valid.
template <class S>
long first_invalid_column(const AffineOperator<S>& m) {
    for (size_t c = 0; c < m.dim; ++c)
        if (!scalar_contains_one(m.column_sum(c))) return static_cast<long>(c);
    return -1;
}

// out = m * v over raw spans; the engine's inner kernel.
template <class S>
void apply_into(const AffineOperator<S>& m, std::span<const S> v, std::span<S> out) {
    const size_t n = m.dim;
    for (size_t r = 0; r < n; ++r) {
        const S* row = m.a.data() + r * n;
        S acc = row[0] * v[0];
        for (size_t c = 1; c < n; ++c) acc += row[c] * v[c];
        out[r] = std::move(acc);
    }
}

template <class S>
AffineVector<S> apply(const AffineOperator<S>& m, const AffineVector<S>& v) {
    if (v.dim() != m.dim)
        raise(ErrorKind::Structural, "operator/vector dimension mismatch (" +
                                         std::to_string(m.dim) + " vs " + std::to_string(v.dim()) + ")");
    AffineVector<S> out(std::vector<S>(m.dim, S(0)));
    apply_into<S>(m, std::span<const S>(v.entries), std::span<S>(out.entries));
    return out;
}

// Matrix product a*b (apply b first, then a).
template <class S>
AffineOperator<S> compose(const AffineOperator<S>& a, const AffineOperator<S>& b) {
    if (a.dim != b.dim) raise(ErrorKind::Structural, "operator dimension mismatch in composition");
    AffineOperator<S> out(a.dim);
    for (size_t r = 0; r < a.dim; ++r)
        for (size_t c = 0; c < a.dim; ++c) {
            S acc(0);
            for (size_t k = 0; k < a.dim; ++k) acc += a.at(r, k) * b.at(k, c);
            out.at(r, c) = std::move(acc);
        }
    return out;
}

// Kronecker product; column sums multiply, so validity is preserved.
template <class S>
AffineOperator<S> tensor(const AffineOperator<S>& a, const AffineOperator<S>& b) {
    AffineOperator<S> out(a.dim * b.dim);
    for (size_t i = 0; i < a.dim; ++i)
        for (size_t j = 0; j < a.dim; ++j)
            for (size_t k = 0; k < b.dim; ++k)
                for (size_t l = 0; l < b.dim; ++l)
                    out.at(i * b.dim + k, j * b.dim + l) = a.at(i, j) * b.at(k, l);
    return out;
}

template <class S>
AffineVector<S> tensor(const AffineVector<S>& a, const AffineVector<S>& b) {
    AffineVector<S> out(std::vector<S>(a.dim() * b.dim(), S(0)));
    for (size_t i = 0; i < a.dim(); ++i)
        for (size_t j = 0; j < b.dim(); ++j)
            out[i * b.dim() + j] = a[i] * b[j];
    return out;
}

// Weighting: observe state i with probability |v_i| / |v|_1. Returns the
// total weight of the given (0-based) accepting indices. The l1 norm is at
// least |entry sum| = 1, so the division is always defined in exact mode.
template <class S>
S weight(const AffineVector<S>& v, std::span<const uint32_t> accepting) {
    S den = v.l1_norm();
    S num(0);
    for (uint32_t idx : accepting) {
        if (idx >= v.dim()) raise(ErrorKind::Parameter, "accepting index out of range");
        num += abs(v[idx]);
    }
    return scalar_weight_div(num, den);
}

} // namespace afav
