#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "afav/oracles.hpp"
#include "afav/protocols.hpp"

using namespace afav;
using R = Rational;

namespace {

VerificationResult<R> run(const MachineSpec<R>& m, std::string_view input, const R& eps) {
    return run_verification(m, input, eps);
}

std::string zeros(size_t l) { return std::string(l, '0'); }
std::string as(size_t l) { return std::string(l, 'a'); }

} // namespace

TEST_CASE("subsetsum: members reach probability 1, non-members follow the gap formula") {
    for (int64_t t : {1, 2, 5}) {
        auto m = build_subsetsum_verifier(AmplificationParam(t));
        R eps(1, 2 * t + 1);

        auto member = run(m, "11#10#1", eps); // 3 = 2 + 1
        CHECK(member.decision == Decision::Accept);
        CHECK(member.max_probability == R(1));

        auto non = run(m, "10#11", eps); // gap 1
        CHECK(non.max_probability == R(1, 1 + 2 * t));
        CHECK(non.decision == Decision::Reject);
    }

    auto m = build_subsetsum_verifier(AmplificationParam(1));
    auto no_delim = run(m, "101", R(1, 3));
    CHECK(no_delim.outcomes.size() == 1);
    CHECK(no_delim.outcomes[0].probability == R(0));
    CHECK(no_delim.decision == Decision::Reject);

    auto empty_pick = run(m, "#1", R(1, 3)); // S = "" reads as 0; empty subset works
    CHECK(empty_pick.max_probability == R(1));
    CHECK(empty_pick.decision == Decision::Accept);

    auto empty_input = run(m, "", R(1, 3)); // no '#': deterministic rejection
    CHECK(empty_input.outcomes.size() == 1);
    CHECK(empty_input.max_probability == R(0));
}

TEST_CASE("subsetsum: per-path probability is 1/(1 + 2t|S - S_I|), path id = pick bits") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> kd(1, 6), val(0, 63), td(1, 4);
    for (int trial = 0; trial < 60; ++trial) {
        int k = kd(rng);
        int64_t t = td(rng);
        std::string input;
        int64_t target = val(rng);
        std::vector<int64_t> blocks;
        auto to_bin = [](int64_t v) {
            std::string s;
            do {
                s.insert(s.begin(), static_cast<char>('0' + (v & 1)));
                v >>= 1;
            } while (v > 0);
            return s;
        };
        input = to_bin(target);
        for (int i = 0; i < k; ++i) {
            blocks.push_back(val(rng));
            input += "#" + to_bin(blocks.back());
        }
        auto m = build_subsetsum_verifier(AmplificationParam(t));
        EnumerateOptions<R> raw;
        raw.dedup = false;
        auto outcomes = weigh_outcomes(m, enumerate_paths(m, input, raw));
        REQUIRE(outcomes.size() == size_t(1) << k);
        for (const auto& o : outcomes) {
            REQUIRE(o.choices.size() == static_cast<size_t>(k));
            int64_t picked = 0;
            for (int i = 0; i < k; ++i)
                if (o.choices[static_cast<size_t>(i)] == '1') picked += blocks[static_cast<size_t>(i)];
            int64_t gap = picked > target ? picked - target : target - picked;
            CHECK(o.probability == R(1, 1 + 2 * t * gap));
        }
    }
}

TEST_CASE("usquare: engine runs match the paper's path states") {
    auto m1 = build_usquare_verifier(AmplificationParam(1));

    auto four = run(m1, zeros(4), R(1, 3));
    CHECK(four.max_probability == R(1));
    bool found = false;
    for (const auto& o : four.outcomes)
        if (o.choices == "01") { // path_2
            CHECK(o.probability == R(1));
            found = true;
        }
    CHECK(found);

    auto three = run(m1, zeros(3), R(1, 3)); // best i=2: |3-4| = 1
    CHECK(three.max_probability == R(1, 3));

    auto empty = run(m1, "", R(1, 3)); // 0 = 0^2
    CHECK(empty.max_probability == R(1));
    CHECK(empty.decision == Decision::Accept);

    for (size_t l = 0; l <= 60; ++l) {
        auto res = run(m1, zeros(l), R(1, 3));
        if (perfect_square(l)) {
            CHECK(res.decision == Decision::Accept);
            CHECK(res.max_probability == R(1));
        } else {
            int64_t best = std::numeric_limits<int64_t>::max();
            for (int64_t i = 1; i * i <= 2 * static_cast<int64_t>(l) + 1; ++i)
                best = std::min(best, std::abs(static_cast<int64_t>(l) - i * i));
            CHECK(res.max_probability == R(1, 1 + 2 * best));
            CHECK(res.decision == Decision::Reject);
        }
    }
}

TEST_CASE("upoly with P=x^2 agrees path-for-path with usquare") {
    auto usq = build_usquare_verifier(AmplificationParam(2));
    auto upo = build_upoly_verifier(PolynomialSpec({0, 0, 1}), AmplificationParam(2));
    for (size_t l = 0; l <= 25; ++l) {
        auto a = weigh_outcomes(usq, enumerate_paths(usq, zeros(l)));
        auto b = weigh_outcomes(upo, enumerate_paths(upo, zeros(l)));
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].choices == b[i].choices);
            CHECK(a[i].probability == b[i].probability);
        }
    }
}

TEST_CASE("upoly worked instances") {
    auto m = build_upoly_verifier(PolynomialSpec({0, 1, 1}), AmplificationParam(2)); // x^2+x
    auto six = run(m, zeros(6), R(1, 5));                                            // P(2) = 6
    CHECK(six.max_probability == R(1));
    bool found = false;
    for (const auto& o : six.outcomes)
        if (o.choices == "01") {
            CHECK(o.probability == R(1));
            found = true;
        }
    CHECK(found);

    auto cube = build_upoly_verifier(PolynomialSpec({0, 0, 0, 1}), AmplificationParam(1)); // x^3
    auto seven = run(cube, zeros(7), R(1, 3)); // min gap |7-8| = 1 at i=2
    CHECK(seven.max_probability == R(1, 3));
    for (const auto& o : seven.outcomes) CHECK(o.probability <= R(1, 3));

    // epsilon-length member: P(0)=0 for x^2+x.
    CHECK(run(m, "", R(1, 5)).max_probability == R(1));
    // P(0)=1 for x^2+1: empty input is a non-member.
    auto off = build_upoly_verifier(PolynomialSpec({1, 0, 1}), AmplificationParam(1));
    CHECK(run(off, "", R(1, 3)).max_probability == R(1, 3));
}

TEST_CASE("alpha_exact: closed forms and the base-B recurrence") {
    auto zero = UnaryLanguageSpec::periodic({}, {0});
    CHECK(alpha_exact(zero, 0) == R(0));
    CHECK(alpha_exact(zero, 7) == R(0));

    auto ones = UnaryLanguageSpec::periodic({}, {1});
    CHECK(alpha_exact(ones, 0) == R(1, 31));
    CHECK(alpha_exact(ones, 3) == R(1, 31));

    auto even = UnaryLanguageSpec::periodic({}, {1, 0});
    CHECK(alpha_exact(even, 0) == R(32, 1023));

    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<int> len(1, 6), bit(0, 1), pre_len(0, 5);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<uint8_t> pre(static_cast<size_t>(pre_len(rng)));
        std::vector<uint8_t> per(static_cast<size_t>(len(rng)));
        for (auto& b : pre) b = static_cast<uint8_t>(bit(rng));
        for (auto& b : per) b = static_cast<uint8_t>(bit(rng));
        auto lang = UnaryLanguageSpec::periodic(pre, per);
        for (uint64_t j = 0; j < 12; ++j) {
            R a = alpha_exact(lang, j);
            CHECK(R(0) <= a);
            CHECK(a <= R(1, 31));
            CHECK(alpha_exact(lang, j + 1) == R(32) * a - R(lang.bit(j) ? 1 : 0));
        }
    }
}

TEST_CASE("alpha_interval: enclosure, nesting, and cross-backend containment") {
    auto zero_oracle = UnaryLanguageSpec::oracle([](uint64_t) { return false; }, 4);
    auto z = alpha_interval(zero_oracle, 0);
    CHECK(z.lo() == R(0));
    CHECK(z.hi() == R(1, 31) * Rational::pow(R(1, 32), 4));

    auto even_periodic = UnaryLanguageSpec::periodic({}, {1, 0});
    auto even_oracle = UnaryLanguageSpec::oracle([](uint64_t l) { return l % 2 == 0; }, 6);
    for (uint64_t j = 0; j < 8; ++j) {
        auto wide = alpha_interval(even_oracle, j, 6);
        auto tight = alpha_interval(even_oracle, j, 7);
        CHECK(wide.contains(tight));
        CHECK(wide.width() == tight.width() * R(32));
        CHECK(wide.contains(alpha_exact(even_periodic, j)));
    }
}

TEST_CASE("unary verifier: worked bounds at B=32, k=283/100") {
    const R k(283, 100);
    const R completeness(1550, 1833);
    const R soundness(3100, 20080);
    CHECK(unary_completeness_bound(k, 32) == completeness);
    CHECK(unary_soundness_bound(k, 32) == soundness);

    auto even = UnaryLanguageSpec::periodic({}, {1, 0});
    auto m = build_unary_verifier(UnaryVerifierConfig(even, k));

    auto member = run(m, as(2), R(155, 1000));
    CHECK(certainly_ge(member.max_probability, completeness));
    CHECK(member.decision == Decision::Accept);
    CHECK(member.outcomes.size() == 8); // 2^(l+1)

    auto non = run(m, as(1), R(155, 1000));
    CHECK(non.decision == Decision::Reject);
    for (const auto& o : non.outcomes) CHECK(o.probability <= soundness);

    // All-zero language: the correct path ends in s1 and is rejected
    // deterministically; wrong-final-guess paths obey the soundness bound.
    auto zero = UnaryLanguageSpec::periodic({}, {0});
    auto mz = build_unary_verifier(UnaryVerifierConfig(zero, k));
    for (size_t l = 0; l <= 4; ++l) {
        auto res = run(mz, as(l), R(155, 1000));
        CHECK(res.decision == Decision::Reject);
        for (const auto& o : res.outcomes) {
            if (o.choices == std::string(l + 1, '0')) CHECK(o.probability == R(0));
            CHECK(o.probability <= soundness);
        }
    }
}

TEST_CASE("unary verifier: e2 follows alpha along the all-correct path") {
    std::mt19937_64 rng(2025);
    std::uniform_int_distribution<int> len(1, 5), bit(0, 1), pre_len(0, 4);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<uint8_t> pre(static_cast<size_t>(pre_len(rng)));
        std::vector<uint8_t> per(static_cast<size_t>(len(rng)));
        for (auto& b : pre) b = static_cast<uint8_t>(bit(rng));
        for (auto& b : per) b = static_cast<uint8_t>(bit(rng));
        auto lang = UnaryLanguageSpec::periodic(pre, per);
        auto m = build_unary_verifier(UnaryVerifierConfig(lang, R(283, 100)));

        const size_t l = 10;
        Configuration<R> c = initial_configuration(m);
        for (size_t j = 0; j <= l; ++j) {
            char symbol = j == 0 ? kLeftMarker : 'a';
            auto succs = step(m, c, symbol);
            REQUIRE(succs.size() == 2);
            c = succs[lang.bit(j) ? 1 : 0]; // follow the correct guess
            CHECK(c.affine[1] == alpha_exact(lang, j + 1));
            CHECK(c.affine[2] == -alpha_exact(lang, j + 1));
        }
    }
}

TEST_CASE("unary verifier: an earlier first wrong guess accepts with lower probability") {
    auto lang = UnaryLanguageSpec::periodic({}, {1, 0, 1});
    auto m = build_unary_verifier(UnaryVerifierConfig(lang, R(283, 100)));
    const size_t l = 4;
    REQUIRE_FALSE(lang.bit(l)); // a^l is a non-member: every accepting path is wrong somewhere

    auto outcomes = weigh_outcomes(m, enumerate_paths(m, as(l)));

    // The path wrong only at the last guess has the largest accepting
    // probability; any path whose first wrong guess is earlier stays strictly
    // below it.
    std::string wrong_at_end;
    for (size_t j = 0; j < l; ++j) wrong_at_end += lang.bit(j) ? '1' : '0';
    wrong_at_end += '1';

    R last(0);
    for (const auto& o : outcomes)
        if (o.choices == wrong_at_end) last = o.probability;
    CHECK(last > R(0));

    size_t checked = 0;
    for (const auto& o : outcomes) {
        if (o.choices.back() != '1' || o.choices == wrong_at_end) continue;
        size_t first_wrong = 0;
        while (first_wrong <= l &&
               (o.choices[first_wrong] == '1') == lang.bit(first_wrong))
            ++first_wrong;
        REQUIRE(first_wrong < l);
        CHECK(o.probability < last);
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("unary verifier config: bound inequalities are enforced") {
    auto lang = UnaryLanguageSpec::periodic({}, {1});
    CHECK_THROWS_WITH_AS(UnaryVerifierConfig(lang, R(1, 100)),
                         doctest::Contains("soundness inequality"), Error);
    CHECK_THROWS_WITH_AS(UnaryVerifierConfig(lang, R(100)),
                         doctest::Contains("completeness inequality"), Error);
    CHECK_THROWS_AS(UnaryVerifierConfig(lang, R(-1)), Error);

    // Suggested k passes its own defaults, for the default and larger bases.
    for (int64_t base : {32, 33, 40, 64, 128}) {
        auto langb = UnaryLanguageSpec::periodic({}, {1, 1, 0}, base);
        UnaryVerifierConfig cfg(langb, suggest_unary_k(base));
        CHECK(unary_soundness_bound(cfg.k, base) <= default_unary_error(base));
    }
    CHECK(default_unary_error(32) == R(31, 200));

    // Larger bases strictly improve the soundness bound (re-derived k).
    CHECK(unary_soundness_bound(suggest_unary_k(64), 64) <
          unary_soundness_bound(R(283, 100), 32));
}

TEST_CASE("interval-backend unary runs contain the exact-backend probabilities") {
    auto periodic = UnaryLanguageSpec::periodic({1}, {1, 0});
    auto via_oracle = UnaryLanguageSpec::oracle(
        [](uint64_t l) { return l == 0 || l % 2 == 1; }, 16);
    auto exact_m = build_unary_verifier(UnaryVerifierConfig(periodic, R(283, 100)));
    auto interval_m = build_unary_verifier_interval(UnaryVerifierConfig(via_oracle, R(283, 100)));

    for (size_t l = 0; l <= 5; ++l) {
        auto exact = weigh_outcomes(exact_m, enumerate_paths(exact_m, as(l)));
        auto enclosed = weigh_outcomes(interval_m, enumerate_paths(interval_m, as(l)));
        REQUIRE(exact.size() == enclosed.size());
        for (size_t i = 0; i < exact.size(); ++i) {
            CHECK(exact[i].choices == enclosed[i].choices);
            CHECK(enclosed[i].probability.contains(exact[i].probability));
        }
        auto decision = decide(std::move(enclosed), R(155, 1000)).decision;
        auto expected = periodic.bit(l) ? Decision::Accept : Decision::Reject;
        CHECK(decision == expected);
    }
}

TEST_CASE("language spec files parse both backends") {
    auto p = UnaryLanguageSpec::parse_file("base 32\npreperiod 10\nperiod 01\n");
    CHECK(p.backend == UnaryLanguageSpec::Backend::Periodic);
    CHECK(p.bit(0));
    CHECK_FALSE(p.bit(1));
    CHECK_FALSE(p.bit(2));
    CHECK(p.bit(3));

    auto o = UnaryLanguageSpec::parse_file("base 32\noracle squares\ntruncation 12\n");
    CHECK(o.backend == UnaryLanguageSpec::Backend::Oracle);
    CHECK(o.truncation == 12);
    CHECK(o.bit(0));
    CHECK(o.bit(4));
    CHECK_FALSE(o.bit(5));

    auto q = UnaryLanguageSpec::parse_file("oracle poly 0,1,1\n");
    CHECK(q.bit(6));
    CHECK_FALSE(q.bit(5));

    CHECK_THROWS_AS(UnaryLanguageSpec::parse_file("period 01\noracle squares\n"), Error);
    CHECK_THROWS_AS(UnaryLanguageSpec::parse_file("base 31\nperiod 1\n"), Error);
    CHECK_THROWS_AS(UnaryLanguageSpec::parse_file("period 012\n"), Error);
    CHECK_THROWS_AS(UnaryLanguageSpec::parse_file("base 32\n"), Error);
}
