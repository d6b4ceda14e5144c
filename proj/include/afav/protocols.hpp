#pragma once

#include <functional>
#include <span>

#include "afav/engine.hpp"
#include "afav/gadgets.hpp"
#include "afav/machine.hpp"

namespace afav {

// Error-amplification parameter: non-members end up accepted with
// probability at most 1/(2t+1).
struct AmplificationParam {
    int64_t t = 1;

    explicit AmplificationParam(int64_t t_) : t(t_) {
        if (t < 1) raise(ErrorKind::Parameter, "amplification parameter t must be >= 1");
    }

    Rational error_bound() const { return Rational(1, 2 * t + 1); }
};

// Verifier for strings S#B_1#...#B_k over {0,1,#}: some path accepts a
// member with probability exactly 1; on the path picking subset I the
// acceptance probability is 1/(1 + 2t|S - S_I|). Inputs without '#' are
// rejected deterministically.
MachineSpec<Rational> build_subsetsum_verifier(const AmplificationParam& t);

// Verifier for 0^(i^2) over {0}: l+1 surviving paths on 0^l; path_i accepts
// with probability 1/(1 + 2t|l - i^2|).
MachineSpec<Rational> build_usquare_verifier(const AmplificationParam& t);

// Verifier for 0^P(i) over {0}: same skeleton with the polynomial gadget;
// path_i accepts with probability 1/(1 + 2t|l - P(i)|).
MachineSpec<Rational> build_upoly_verifier(const PolynomialSpec& p, const AmplificationParam& t);

// --- unary languages (arbitrary, via base-B membership encoding) -----------

// A unary language given either as an eventually periodic bit sequence
// (exact encoding) or as a membership oracle (interval-truncated encoding).
// bit(i) = 1 iff a^i is in the language.
struct UnaryLanguageSpec {
    enum class Backend { Periodic, Oracle };

    Backend backend = Backend::Periodic;
    int64_t base = 32; // B >= 32

    // periodic backend
    std::vector<uint8_t> preperiod;
    std::vector<uint8_t> period;

    // oracle backend
    std::function<bool(uint64_t)> member; // pure; queried concurrently
    uint64_t truncation = 16;             // T >= 1

    static UnaryLanguageSpec periodic(std::vector<uint8_t> pre, std::vector<uint8_t> per,
                                      int64_t base = 32);
    static UnaryLanguageSpec oracle(std::function<bool(uint64_t)> member, uint64_t truncation,
                                    int64_t base = 32);

    // Language spec file: `base <B>`, then either `preperiod <bits>` /
    // `period <bits>`, or `oracle squares` / `oracle poly <c0,c1,...>` with
    // `truncation <T>`.
    static UnaryLanguageSpec parse_file(std::string_view text);

    bool bit(uint64_t i) const;
};

// Exact tail value of the membership encoding: sum_{i>=0} b_{j+i} / B^(i+1).
// Periodic backend only. Satisfies alpha[j+1] = B*alpha[j] - b_j and
// 0 <= alpha <= 1/(B-1).
Rational alpha_exact(const UnaryLanguageSpec& lang, uint64_t j);

// Certified enclosure of the tail value from T membership queries:
// [truncated sum, truncated sum + 1/((B-1) B^T)]. Works with either backend.
RationalInterval alpha_interval(const UnaryLanguageSpec& lang, uint64_t j, uint64_t truncation);
RationalInterval alpha_interval(const UnaryLanguageSpec& lang, uint64_t j); // lang.truncation

// End-marker amplification k and the bounds it achieves:
//   completeness: every member has a path with probability >= 1/(1 + 2k/(B-1))
//   soundness:    every non-member path is <= 1/(1 + 2k(B-2)/(B-1))
Rational unary_completeness_bound(const Rational& k, int64_t base);
Rational unary_soundness_bound(const Rational& k, int64_t base);

// Near-optimal rational k for base B (the optimum is (B-1)/(2 sqrt(B-2))).
Rational suggest_unary_k(int64_t base);

// Default error target for base B: the least x/1000 at or above
// 1/(1 + sqrt(B-2)). For B=32 this is 31/200 = 0.155.
Rational default_unary_error(int64_t base);

struct UnaryVerifierConfig {
    UnaryLanguageSpec language;
    Rational k;
    Rational completeness_target; // required: completeness bound >= this
    Rational soundness_target;    // required: soundness bound <= this

    // Validates the two bound inequalities at construction; targets default
    // to (1 - e, e) with e = default_unary_error(base).
    UnaryVerifierConfig(UnaryLanguageSpec lang, Rational k);
    UnaryVerifierConfig(UnaryLanguageSpec lang, Rational k, Rational completeness_target,
                        Rational soundness_target);

private:
    void check_bounds() const;
};

// Two classical states (s2 accepting), three affine states (e1 accepting);
// guesses one membership bit per symbol, 2^(l+1) paths on a^l.
MachineSpec<Rational> build_unary_verifier(const UnaryVerifierConfig& cfg); // periodic backend
MachineSpec<RationalInterval> build_unary_verifier_interval(const UnaryVerifierConfig& cfg);

// Certified cut for unary verifier runs: once |e_2| >= 1 it stays >= 1, so
// every completion of the path ends at or below 1/(1+2k), under the
// soundness bound. Off by default.
template <class S>
std::function<bool(uint32_t, std::span<const S>)> unary_prune_hook() {
    return [](uint32_t, std::span<const S> v) { return abs_at_least(v[1], Rational(1)); };
}

} // namespace afav
