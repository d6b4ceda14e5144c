#pragma once

#include <functional>
#include <span>
#include <string_view>

#include "afav/machine.hpp"

namespace afav {

// Default live-configuration budget; overridable via the AFAV_BUDGET
// environment variable and per-run options.
size_t default_budget();

template <class S>
struct EnumerateOptions {
    bool dedup = true;
    // Certified cut: returns true when every completion of the configuration
    // is guaranteed to stay at or below the error bound. Must be pure; it is
    // called concurrently. Never consulted after the right marker.
    std::function<bool(uint32_t classical, std::span<const S> affine)> prune;
    size_t budget = default_budget();
    int threads = 0; // 0 = all available
    bool check_invariants = true;
};

template <class S>
struct FinalConfig {
    std::string choices;
    uint32_t classical = 0;
    AffineVector<S> affine;
    uint64_t merged = 1; // number of raw paths this configuration stands for
};

template <class S>
struct PathOutcome {
    std::string choices;
    uint32_t classical = 0;
    S probability = S(0); // 0 whenever classical != s_a
    uint64_t merged = 1;
};

enum class Decision { Accept, Reject, Inconclusive };

const char* decision_name(Decision d);

template <class S>
struct VerificationResult {
    std::vector<PathOutcome<S>> outcomes; // lexicographic by choices
    S max_probability = S(0);
    Decision decision = Decision::Reject;
};

// Feeds ^ input $ through the machine, breadth-first with one level per
// symbol, and returns all surviving final configurations in canonical
// (lexicographic-by-choices) order. Levels expand in parallel; results do not
// depend on the worker count.
template <class S>
std::vector<FinalConfig<S>> enumerate_paths(const MachineSpec<S>& m, std::string_view input,
                                            const EnumerateOptions<S>& options = {});

// Applies the end-of-input rule: deterministic rejection off the accepting
// classical state, weighting otherwise.
template <class S>
std::vector<PathOutcome<S>> weigh_outcomes(const MachineSpec<S>& m,
                                           const std::vector<FinalConfig<S>>& finals);

// Decision rule at error bound epsilon in [0, 1/2): accept when some path is
// certainly >= 1-epsilon, reject when every path is certainly <= epsilon,
// inconclusive otherwise (an interval straddling a threshold).
template <class S>
VerificationResult<S> decide(std::vector<PathOutcome<S>> outcomes, const Rational& epsilon);

template <class S>
VerificationResult<S> run_verification(const MachineSpec<S>& m, std::string_view input,
                                       const Rational& epsilon,
                                       const EnumerateOptions<S>& options = {});

extern template std::vector<FinalConfig<Rational>> enumerate_paths(const MachineSpec<Rational>&,
                                                                   std::string_view,
                                                                   const EnumerateOptions<Rational>&);
extern template std::vector<FinalConfig<RationalInterval>> enumerate_paths(
    const MachineSpec<RationalInterval>&, std::string_view, const EnumerateOptions<RationalInterval>&);
extern template std::vector<PathOutcome<Rational>> weigh_outcomes(const MachineSpec<Rational>&,
                                                                  const std::vector<FinalConfig<Rational>>&);
extern template std::vector<PathOutcome<RationalInterval>> weigh_outcomes(
    const MachineSpec<RationalInterval>&, const std::vector<FinalConfig<RationalInterval>>&);
extern template VerificationResult<Rational> decide(std::vector<PathOutcome<Rational>>, const Rational&);
extern template VerificationResult<RationalInterval> decide(std::vector<PathOutcome<RationalInterval>>,
                                                            const Rational&);
extern template VerificationResult<Rational> run_verification(const MachineSpec<Rational>&,
                                                               std::string_view, const Rational&,
                                                               const EnumerateOptions<Rational>&);
extern template VerificationResult<RationalInterval> run_verification(
    const MachineSpec<RationalInterval>&, std::string_view, const Rational&,
    const EnumerateOptions<RationalInterval>&);

} // namespace afav
