#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "afav/engine.hpp"
#include "afav/machine_io.hpp"
#include "afav/protocols.hpp"

using namespace afav;
using R = Rational;

namespace {

std::string zeros(size_t l) { return std::string(l, '0'); }

template <class S>
std::multiset<std::string> final_config_set(const std::vector<FinalConfig<S>>& finals) {
    std::multiset<std::string> keys;
    for (const auto& f : finals) {
        std::string k = std::to_string(f.classical);
        for (const auto& e : f.affine.entries) k += "|" + scalar_str(e);
        for (uint64_t i = 0; i < f.merged; ++i) keys.insert(k);
    }
    return keys;
}

} // namespace

TEST_CASE("deterministic machines yield exactly one path") {
    std::string text = R"(machine det
classical s1
affine 2
alphabet a
initial s1 e1
accept-classical s1
accept-affine e2
matrix I 2x2
1 0
0 1
matrix B 2x2
0 -1
1 2
trans s1 '^' -> s1 I
trans s1 a -> s1 B
trans s1 '$' -> s1 I
)";
    auto m = parse_machine(text);
    auto finals = enumerate_paths(m, "aaa");
    REQUIRE(finals.size() == 1);
    CHECK(finals[0].choices.empty());
    CHECK(finals[0].affine == AffineVector<R>{R(-2), R(3)});
    auto outcomes = weigh_outcomes(m, finals);
    CHECK(outcomes[0].probability == R(3, 5));
}

TEST_CASE("usquare runs keep l+1 surviving paths") {
    auto m = build_usquare_verifier(AmplificationParam(1));
    for (size_t l = 0; l <= 8; ++l) {
        auto finals = enumerate_paths(m, zeros(l));
        CHECK(finals.size() == l + 1);
    }
}

TEST_CASE("subsetsum runs materialize 2^k paths without dedup") {
    auto m = build_subsetsum_verifier(AmplificationParam(1));
    EnumerateOptions<R> raw;
    raw.dedup = false;
    for (size_t k = 1; k <= 10; ++k) {
        std::string input = "1";
        for (size_t i = 0; i < k; ++i) input += "#1";
        auto finals = enumerate_paths(m, input, raw);
        CHECK(finals.size() == size_t(1) << k);
    }
}

TEST_CASE("dedup merges identical configurations without changing the outcome set") {
    auto m = build_subsetsum_verifier(AmplificationParam(1));
    // Two equal blocks: picking either one gives identical configurations.
    std::string input = "10#1#1#10";
    EnumerateOptions<R> with, without;
    with.dedup = true;
    without.dedup = false;

    auto merged = enumerate_paths(m, input, with);
    auto raw = enumerate_paths(m, input, without);
    CHECK(merged.size() < raw.size());

    // Identical multiset of final configurations (merged counts unfolded)...
    CHECK(final_config_set(merged) == final_config_set(raw));

    // ...and identical max/min probabilities and decision.
    auto om = decide(weigh_outcomes(m, merged), R(1, 3));
    auto ow = decide(weigh_outcomes(m, raw), R(1, 3));
    CHECK(om.max_probability == ow.max_probability);
    CHECK(om.decision == ow.decision);

    auto min_of = [](const std::vector<PathOutcome<R>>& v) {
        R best = v.front().probability;
        for (const auto& o : v) best = std::min(best, o.probability);
        return best;
    };
    CHECK(min_of(om.outcomes) == min_of(ow.outcomes));

    // Representative choices carry the merge multiplicity.
    uint64_t total = 0;
    for (const auto& f : merged) total += f.merged;
    CHECK(total == raw.size());
}

TEST_CASE("outcomes arrive in lexicographic choice order") {
    auto m = build_usquare_verifier(AmplificationParam(1));
    auto finals = enumerate_paths(m, zeros(5));
    for (size_t i = 1; i < finals.size(); ++i) CHECK(finals[i - 1].choices < finals[i].choices);
}

TEST_CASE("worker count does not change the result") {
    auto m = build_subsetsum_verifier(AmplificationParam(3));
    std::string input = "1011#10#11#1#101#1";
    EnumerateOptions<R> one, many;
    one.threads = 1;
    many.threads = 4;
    auto a = enumerate_paths(m, input, one);
    auto b = enumerate_paths(m, input, many);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].choices == b[i].choices);
        CHECK(a[i].classical == b[i].classical);
        CHECK(a[i].affine == b[i].affine);
        CHECK(a[i].merged == b[i].merged);
    }
}

TEST_CASE("budget overruns raise a resource error naming the step") {
    auto m = build_subsetsum_verifier(AmplificationParam(1));
    EnumerateOptions<R> opt;
    opt.budget = 8;
    try {
        enumerate_paths(m, "1#1#1#1#1#1", opt);
        FAIL("expected resource error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Resource);
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
}

TEST_CASE("inputs are validated before running") {
    auto m = build_usquare_verifier(AmplificationParam(1));
    CHECK_THROWS_AS(enumerate_paths(m, "0^0"), Error);
    CHECK_THROWS_AS(enumerate_paths(m, "0$"), Error);
    CHECK_THROWS_AS(enumerate_paths(m, "01"), Error); // '1' not in {0}
}

TEST_CASE("missing transitions surface as configuration errors") {
    std::string text = R"(machine hole
classical s1 s2
affine 1
alphabet a
initial s1 e1
accept-classical s2
accept-affine e1
matrix I 1x1
1
trans s1 '^' -> s2 I
)";
    auto m = parse_machine(text);
    try {
        enumerate_paths(m, "a");
        FAIL("expected configuration error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Configuration);
        CHECK(std::string(e.what()).find("s2") != std::string::npos);
        CHECK(std::string(e.what()).find("'a'") != std::string::npos);
    }
}

TEST_CASE("engine invariant checks catch machines built outside the validators") {
    MachineSpec<R> m;
    m.name = "broken";
    m.classical_names = {"s"};
    m.affine_dim = 2;
    m.alphabet = {'a'};
    m.initial_classical = 0;
    m.initial_affine = 0;
    m.accept_classical = 0;
    m.accept_affine = {0};
    AffineOperator<R> bad(2);
    bad.at(0, 0) = R(2); // column sums 2 and 0: breaks entry-sum preservation
    bad.at(1, 1) = R(0);
    m.arms_mut(0, kLeftMarker) = {{0, AffineOperator<R>::identity(2)}};
    m.arms_mut(0, 'a') = {{0, bad}};
    m.arms_mut(0, kRightMarker) = {{0, AffineOperator<R>::identity(2)}};
    CHECK_THROWS_AS(enumerate_paths(m, "a"), Error);
}

TEST_CASE("pruning cuts certified subtrees only") {
    auto lang = UnaryLanguageSpec::periodic({1, 0, 1}, {0, 1});
    auto cfg = UnaryVerifierConfig(lang, Rational(283, 100));
    auto m = build_unary_verifier(cfg);

    EnumerateOptions<R> plain;
    EnumerateOptions<R> pruned;
    pruned.prune = unary_prune_hook<R>();

    for (size_t l = 0; l <= 9; ++l) {
        std::string input(l, 'a');
        auto full = decide(weigh_outcomes(m, enumerate_paths(m, input, plain)), R(155, 1000));
        auto cut = decide(weigh_outcomes(m, enumerate_paths(m, input, pruned)), R(155, 1000));
        CHECK(full.max_probability == cut.max_probability);
        CHECK(full.decision == cut.decision);
        CHECK(cut.outcomes.size() <= full.outcomes.size());
    }
    // The cut is substantial: linearly many paths instead of 2^(l+1).
    auto cut = enumerate_paths(m, std::string(9, 'a'), pruned);
    CHECK(cut.size() < 64);
    auto full = enumerate_paths(m, std::string(9, 'a'), plain);
    CHECK(full.size() == size_t(1) << 10);
}
