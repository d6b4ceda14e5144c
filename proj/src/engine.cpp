#include "afav/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace afav {

size_t default_budget() {
    if (const char* env = std::getenv("AFAV_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<size_t>(v);
    }
    return size_t(1) << 22;
}

const char* decision_name(Decision d) {
    switch (d) {
        case Decision::Accept: return "accept";
        case Decision::Reject: return "reject";
        case Decision::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

int resolve_threads(int requested) {
#ifdef _OPENMP
    int max = omp_get_max_threads();
    if (requested <= 0) return max;
    return std::min(requested, max);
#else
    (void)requested;
    return 1;
#endif
}

// Choice digits are recorded as a chain (one node per branch point) and
// materialized into strings only for the surviving configurations.
struct TraceNode {
    int64_t parent;
    char digit;
};

std::string materialize_choices(const std::vector<TraceNode>& arena, int64_t tail) {
    std::string s;
    for (int64_t i = tail; i >= 0; i = arena[static_cast<size_t>(i)].parent)
        s += arena[static_cast<size_t>(i)].digit;
    std::reverse(s.begin(), s.end());
    return s;
}

// Structure-of-arrays frontier: one level of the computation tree.
template <class S>
struct Level {
    size_t dim = 0;
    std::vector<uint32_t> classical;
    std::vector<S> affine; // size() == count()*dim
    std::vector<uint64_t> merged;
    std::vector<int64_t> trace;

    size_t count() const { return classical.size(); }
    std::span<const S> vec(size_t i) const { return {affine.data() + i * dim, dim}; }
    std::span<S> vec(size_t i) { return {affine.data() + i * dim, dim}; }
};

template <class S>
uint64_t config_hash(uint32_t classical, std::span<const S> v) {
    uint64_t h = 0xcbf29ce484222325ULL ^ classical;
    for (const S& e : v) h = (h ^ scalar_hash(e)) * 0x100000001b3ULL;
    return h;
}

template <class S>
bool config_equal(uint32_t ca, std::span<const S> va, uint32_t cb, std::span<const S> vb) {
    if (ca != cb) return false;
    for (size_t i = 0; i < va.size(); ++i)
        if (!(va[i] == vb[i])) return false;
    return true;
}

// Merges identical (classical, affine) configurations, keeping the earliest
// representative and summing path multiplicities. Serial by design: the
// result must not depend on the worker count.
template <class S>
void dedup_level(Level<S>& level) {
    const size_t n = level.count();
    if (n < 2) return;
    std::unordered_map<uint64_t, std::vector<uint32_t>> buckets;
    buckets.reserve(n * 2);
    std::vector<uint32_t> keep;
    keep.reserve(n);
    std::vector<uint64_t> merged_into(n, 0);
    bool any_merge = false;
    for (size_t i = 0; i < n; ++i) {
        uint64_t h = config_hash<S>(level.classical[i], level.vec(i));
        auto& bucket = buckets[h];
        bool found = false;
        for (uint32_t j : bucket) {
            if (config_equal<S>(level.classical[i], level.vec(i), level.classical[j], level.vec(j))) {
                merged_into[j] += level.merged[i];
                found = true;
                any_merge = true;
                break;
            }
        }
        if (!found) {
            bucket.push_back(static_cast<uint32_t>(i));
            keep.push_back(static_cast<uint32_t>(i));
        }
    }
    if (!any_merge) return;
    Level<S> out;
    out.dim = level.dim;
    out.classical.reserve(keep.size());
    out.affine.reserve(keep.size() * level.dim);
    out.merged.reserve(keep.size());
    out.trace.reserve(keep.size());
    for (uint32_t i : keep) {
        out.classical.push_back(level.classical[i]);
        for (size_t d = 0; d < level.dim; ++d) out.affine.push_back(std::move(level.vec(i)[d]));
        out.merged.push_back(level.merged[i] + merged_into[i]);
        out.trace.push_back(level.trace[i]);
    }
    level = std::move(out);
}

template <class S>
void prune_level(Level<S>& level,
                 const std::function<bool(uint32_t, std::span<const S>)>& prune, int nthreads) {
    const size_t n = level.count();
    if (n == 0) return;
    std::vector<uint8_t> cut(n, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads) if (n >= 64)
#endif
    for (size_t i = 0; i < n; ++i) cut[i] = prune(level.classical[i], level.vec(i)) ? 1 : 0;
    size_t w = 0;
    for (size_t i = 0; i < n; ++i) {
        if (cut[i]) continue;
        if (w != i) {
            level.classical[w] = level.classical[i];
            for (size_t d = 0; d < level.dim; ++d) level.vec(w)[d] = std::move(level.vec(i)[d]);
            level.merged[w] = level.merged[i];
            level.trace[w] = level.trace[i];
        }
        ++w;
    }
    level.classical.resize(w);
    level.affine.resize(w * level.dim);
    level.merged.resize(w);
    level.trace.resize(w);
}

} // namespace

template <class S>
std::vector<FinalConfig<S>> enumerate_paths(const MachineSpec<S>& m, std::string_view input,
                                            const EnumerateOptions<S>& options) {
    for (char c : input) {
        if (c == kLeftMarker || c == kRightMarker)
            raise(ErrorKind::Parameter, std::string("input contains reserved marker '") + c + "'");
        if (!m.in_alphabet(c))
            raise(ErrorKind::Parameter, std::string("input symbol '") + c + "' not in machine alphabet");
    }
    const int nthreads = resolve_threads(options.threads);

    std::string framed;
    framed.reserve(input.size() + 2);
    framed += kLeftMarker;
    framed += input;
    framed += kRightMarker;

    std::vector<TraceNode> arena;
    Level<S> frontier;
    frontier.dim = m.affine_dim;
    frontier.classical.push_back(m.initial_classical);
    {
        AffineVector<S> v0 = m.initial_vector();
        for (size_t d = 0; d < m.affine_dim; ++d) frontier.affine.push_back(std::move(v0[d]));
    }
    frontier.merged.push_back(1);
    frontier.trace.push_back(-1);

    const size_t n_states = m.classical_names.size();
    std::vector<const std::vector<typename MachineSpec<S>::Arm>*> arms_of(n_states);

    for (size_t pos = 0; pos < framed.size(); ++pos) {
        const char symbol = framed[pos];
        const bool symbols_remain = pos + 1 < framed.size();
        const size_t n = frontier.count();
        if (n == 0) break;

        for (size_t s = 0; s < n_states; ++s) arms_of[s] = m.arms(static_cast<uint32_t>(s), symbol);

        // Child slots are fixed up front so the parallel expansion is
        // order-deterministic.
        std::vector<size_t> offset(n + 1, 0);
        for (size_t i = 0; i < n; ++i) {
            const auto* arms = arms_of[frontier.classical[i]];
            if (!arms)
                raise(ErrorKind::Configuration,
                      "no transition from state '" + m.classical_names.at(frontier.classical[i]) +
                          "' on symbol '" + std::string(1, symbol) + "' (step " + std::to_string(pos) + ")");
            offset[i + 1] = offset[i] + arms->size();
        }
        const size_t n_children = offset[n];
        if (n_children > options.budget)
            raise(ErrorKind::Resource, "configuration budget exceeded at step " + std::to_string(pos) +
                                           ": " + std::to_string(n_children) + " > " +
                                           std::to_string(options.budget));

        Level<S> next;
        next.dim = frontier.dim;
        next.classical.assign(n_children, 0);
        next.affine.assign(n_children * next.dim, S(0));
        next.merged.assign(n_children, 0);
        next.trace.assign(n_children, -1);

        const size_t arena_base = arena.size();
        size_t arena_grow = 0;
        for (size_t i = 0; i < n; ++i) {
            const auto* arms = arms_of[frontier.classical[i]];
            if (arms->size() > 1) arena_grow += arms->size();
        }
        arena.resize(arena_base + arena_grow);
        // Deterministic trace-node slots, mirroring the child slots.
        {
            size_t cursor = arena_base;
            for (size_t i = 0; i < n; ++i) {
                const auto* arms = arms_of[frontier.classical[i]];
                if (arms->size() > 1) {
                    for (size_t k = 0; k < arms->size(); ++k) {
                        arena[cursor] = TraceNode{frontier.trace[i], choice_digit(k)};
                        next.trace[offset[i] + k] = static_cast<int64_t>(cursor);
                        ++cursor;
                    }
                } else {
                    next.trace[offset[i]] = frontier.trace[i];
                }
            }
        }

        std::atomic<bool> failed{false};
        std::string failure;
        std::mutex failure_mu;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(nthreads) if (n >= 32)
#endif
        for (size_t i = 0; i < n; ++i) {
            if (failed.load(std::memory_order_relaxed)) continue;
            const auto* arms = arms_of[frontier.classical[i]];
            for (size_t k = 0; k < arms->size(); ++k) {
                const auto& arm = (*arms)[k];
                const size_t slot = offset[i] + k;
                next.classical[slot] = arm.next;
                apply_into<S>(arm.op, frontier.vec(i), next.vec(slot));
                next.merged[slot] = frontier.merged[i];
                if (options.check_invariants) {
                    S sum(0);
                    S l1(0);
                    for (const S& e : next.vec(slot)) {
                        sum += e;
                        l1 += abs(e);
                    }
                    if (!scalar_contains_one(sum) || !scalar_l1_at_least_one(l1)) {
                        std::lock_guard<std::mutex> lock(failure_mu);
                        failure = "affine invariant violated at step " + std::to_string(pos) +
                                  " (entry sum or l1 norm)";
                        failed.store(true, std::memory_order_relaxed);
                        break;
                    }
                }
            }
        }
        if (failed.load()) raise(ErrorKind::Structural, failure);

        if (options.dedup) dedup_level(next);
        if (options.prune && symbols_remain) prune_level(next, options.prune, nthreads);
        frontier = std::move(next);
    }

    std::vector<FinalConfig<S>> finals;
    finals.reserve(frontier.count());
    for (size_t i = 0; i < frontier.count(); ++i) {
        FinalConfig<S> f;
        f.choices = materialize_choices(arena, frontier.trace[i]);
        f.classical = frontier.classical[i];
        f.affine.entries.assign(frontier.vec(i).begin(), frontier.vec(i).end());
        f.merged = frontier.merged[i];
        finals.push_back(std::move(f));
    }
    std::sort(finals.begin(), finals.end(),
              [](const FinalConfig<S>& a, const FinalConfig<S>& b) { return a.choices < b.choices; });
    return finals;
}

template <class S>
std::vector<PathOutcome<S>> weigh_outcomes(const MachineSpec<S>& m,
                                           const std::vector<FinalConfig<S>>& finals) {
    std::vector<PathOutcome<S>> out(finals.size());
    std::span<const uint32_t> accepting(m.accept_affine);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (finals.size() >= 32)
#endif
    for (size_t i = 0; i < finals.size(); ++i) {
        const auto& f = finals[i];
        PathOutcome<S> o;
        o.choices = f.choices;
        o.classical = f.classical;
        o.merged = f.merged;
        o.probability = f.classical == m.accept_classical ? weight(f.affine, accepting) : S(0);
        out[i] = std::move(o);
    }
    return out;
}

template <class S>
VerificationResult<S> decide(std::vector<PathOutcome<S>> outcomes, const Rational& epsilon) {
    if (epsilon.sign() < 0 || !(epsilon < Rational(1, 2)))
        raise(ErrorKind::Parameter, "error bound must lie in [0, 1/2), got " + epsilon.str());
    VerificationResult<S> result;
    result.outcomes = std::move(outcomes);
    S max_p(0);
    for (size_t i = 0; i < result.outcomes.size(); ++i)
        max_p = i == 0 ? result.outcomes[i].probability
                       : max_hull(max_p, result.outcomes[i].probability);
    result.max_probability = max_p;
    const Rational threshold_accept = Rational(1) - epsilon;
    if (certainly_ge(result.max_probability, threshold_accept))
        result.decision = Decision::Accept;
    else if (certainly_le(result.max_probability, epsilon))
        result.decision = Decision::Reject;
    else
        result.decision = Decision::Inconclusive;
    return result;
}

template <class S>
VerificationResult<S> run_verification(const MachineSpec<S>& m, std::string_view input,
                                       const Rational& epsilon, const EnumerateOptions<S>& options) {
    auto finals = enumerate_paths(m, input, options);
    auto outcomes = weigh_outcomes(m, finals);
    return decide(std::move(outcomes), epsilon);
}

MachineSpec<RationalInterval> to_interval(const MachineSpec<Rational>& m) {
    MachineSpec<RationalInterval> out;
    out.name = m.name;
    out.classical_names = m.classical_names;
    out.affine_dim = m.affine_dim;
    out.alphabet = m.alphabet;
    out.initial_classical = m.initial_classical;
    out.initial_affine = m.initial_affine;
    out.accept_classical = m.accept_classical;
    out.accept_affine = m.accept_affine;
    for (const auto& [key, arms] : m.transitions) {
        auto& target = out.transitions[key];
        for (const auto& arm : arms) {
            AffineOperator<RationalInterval> op(arm.op.dim);
            for (size_t i = 0; i < arm.op.a.size(); ++i) op.a[i] = RationalInterval(arm.op.a[i]);
            target.push_back({arm.next, std::move(op)});
        }
    }
    return out;
}

template std::vector<FinalConfig<Rational>> enumerate_paths(const MachineSpec<Rational>&,
                                                            std::string_view,
                                                            const EnumerateOptions<Rational>&);
template std::vector<FinalConfig<RationalInterval>> enumerate_paths(
    const MachineSpec<RationalInterval>&, std::string_view, const EnumerateOptions<RationalInterval>&);
template std::vector<PathOutcome<Rational>> weigh_outcomes(const MachineSpec<Rational>&,
                                                           const std::vector<FinalConfig<Rational>>&);
template std::vector<PathOutcome<RationalInterval>> weigh_outcomes(
    const MachineSpec<RationalInterval>&, const std::vector<FinalConfig<RationalInterval>>&);
template VerificationResult<Rational> decide(std::vector<PathOutcome<Rational>>, const Rational&);
template VerificationResult<RationalInterval> decide(std::vector<PathOutcome<RationalInterval>>,
                                                     const Rational&);
template VerificationResult<Rational> run_verification(const MachineSpec<Rational>&, std::string_view,
                                                       const Rational&, const EnumerateOptions<Rational>&);
template VerificationResult<RationalInterval> run_verification(const MachineSpec<RationalInterval>&,
                                                               std::string_view, const Rational&,
                                                               const EnumerateOptions<RationalInterval>&);

} // namespace afav
