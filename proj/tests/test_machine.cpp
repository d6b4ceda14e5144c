#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afav/machine_io.hpp"
#include "afav/protocols.hpp"

using namespace afav;
using R = Rational;

namespace {

const char* kToyMachine = R"(# a two-state counter over {0,1,'#'}
machine toy
classical s1 s2
affine 3
alphabet 0 1 '#'
initial s1 e1
accept-classical s2
accept-affine e1 e3
matrix M1 3x3
1 0 0
1 1 0
-1 0 1
trans s1 '^' -> s1 M1
trans s1 0 -> s1 M1
trans s1 0 -> s2 M1   # second choice for the same pair
trans s1 1 -> s2 M1
trans s1 '#' -> s1 M1
trans s2 '$' -> s2 M1
trans s1 '$' -> s1 M1
trans s2 0 -> s2 M1
trans s2 1 -> s2 M1
trans s2 '#' -> s2 M1
)";

} // namespace

TEST_CASE("parse reads the documented format") {
    auto m = parse_machine(kToyMachine);
    CHECK(m.name == "toy");
    CHECK(m.classical_names == std::vector<std::string>{"s1", "s2"});
    CHECK(m.affine_dim == 3);
    CHECK(m.alphabet == std::vector<char>{'0', '1', '#'});
    CHECK(m.initial_classical == 0);
    CHECK(m.initial_affine == 0);
    CHECK(m.accept_classical == 1);
    CHECK(m.accept_affine == std::vector<uint32_t>{0, 2});
    REQUIRE(m.arms(0, '0') != nullptr);
    CHECK(m.arms(0, '0')->size() == 2); // repeated lines, in order
    CHECK(m.arms(0, '0')->at(1).next == 1);
}

TEST_CASE("emit and parse round-trip protocol machines structurally") {
    auto sub = build_subsetsum_verifier(AmplificationParam(2));
    CHECK(parse_machine(emit_machine(sub)) == sub);

    auto usq = build_usquare_verifier(AmplificationParam(1));
    auto reparsed = parse_machine(emit_machine(usq));
    CHECK(reparsed == usq);
    for (const auto& [key, arms] : reparsed.transitions)
        for (const auto& arm : arms) CHECK(validate_operator(arm.op));

    auto unary = build_unary_verifier(
        UnaryVerifierConfig(UnaryLanguageSpec::periodic({}, {1, 0}), Rational(283, 100)));
    CHECK(parse_machine(emit_machine(unary)) == unary);
}

TEST_CASE("interval machines are not serializable") {
    auto cfg = UnaryVerifierConfig(
        UnaryLanguageSpec::oracle([](uint64_t l) { return l % 2 == 0; }, 8), Rational(283, 100));
    auto m = build_unary_verifier_interval(cfg);
    CHECK_THROWS_WITH_AS(emit_machine(m), doctest::Contains("not serializable"), Error);
}

TEST_CASE("column-sum violations name the offending column") {
    std::string text = R"(machine bad
classical s1
affine 3
alphabet 0
initial s1 e1
accept-classical s1
accept-affine e1
matrix M1 3x3
1 1 0
0 -2 0
0 1 1
)";
    try {
        parse_machine(text);
        FAIL("expected a structural error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Structural);
        CHECK(std::string(e.what()).find("column 2") != std::string::npos);
    }
}

TEST_CASE("missing directives are syntax errors") {
    std::string no_initial = R"(machine bad
classical s1
affine 1
alphabet 0
accept-classical s1
accept-affine e1
)";
    try {
        parse_machine(no_initial);
        FAIL("expected a syntax error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Syntax);
        CHECK(std::string(e.what()).find("initial") != std::string::npos);
    }
}

TEST_CASE("assorted malformed inputs carry line numbers") {
    std::string bad_scalar = "machine m\nclassical s\naffine 1\nalphabet 0\ninitial s e1\n"
                             "accept-classical s\naccept-affine e1\nmatrix M 1x1\n0.5\n";
    try {
        parse_machine(bad_scalar);
        FAIL("expected a syntax error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Syntax);
        CHECK(e.line() == 9);
    }

    std::string bad_symbol = "machine m\nclassical s\naffine 1\nalphabet # x\n";
    CHECK_THROWS_AS(parse_machine(bad_symbol), Error);

    std::string unknown_matrix = "machine m\nclassical s\naffine 1\nalphabet 0\ninitial s e1\n"
                                 "accept-classical s\naccept-affine e1\ntrans s 0 -> s NOPE\n";
    CHECK_THROWS_WITH_AS(parse_machine(unknown_matrix), doctest::Contains("unknown matrix"), Error);
}

TEST_CASE("step yields one successor per arm and errors on holes") {
    auto m = parse_machine(kToyMachine);
    auto c0 = initial_configuration(m);
    auto after_marker = step(m, c0, kLeftMarker);
    REQUIRE(after_marker.size() == 1);
    CHECK(after_marker[0].choices.empty()); // singleton steps record no digit

    auto branched = step(m, after_marker[0], '0');
    REQUIRE(branched.size() == 2);
    CHECK(branched[0].choices == "0");
    CHECK(branched[1].choices == "1");
    CHECK(branched[1].classical == 1);

    // The unary verifier guesses one bit per symbol: two successors on 'a'.
    auto unary = build_unary_verifier(
        UnaryVerifierConfig(UnaryLanguageSpec::periodic({}, {1, 0}), Rational(283, 100)));
    auto uc = initial_configuration(unary);
    auto g0 = step(m, c0, kLeftMarker);
    CHECK(step(unary, step(unary, uc, kLeftMarker)[0], 'a').size() == 2);

    // The subset-sum verifier forks at '#' while scanning.
    auto sub = build_subsetsum_verifier(AmplificationParam(1));
    auto sc = initial_configuration(sub);
    sc = step(sub, sc, kLeftMarker)[0];
    sc = step(sub, sc, '1')[0];
    auto picks = step(sub, sc, '#');
    CHECK(picks.size() == 2);

    Configuration<R> hole = c0;
    hole.classical = 0;
    CHECK_THROWS_AS(step(m, hole, 'z'), Error);
}

TEST_CASE("decide applies the error-bound rule") {
    auto outcome = [](const char* choices, R p) {
        PathOutcome<R> o;
        o.choices = choices;
        o.classical = 0;
        o.probability = p;
        return o;
    };
    auto r1 = decide<R>({outcome("0", R(1))}, R(1, 3));
    CHECK(r1.decision == Decision::Accept);
    CHECK(r1.max_probability == R(1));

    auto r2 = decide<R>({outcome("0", R(1, 7)), outcome("1", R(0))}, R(1, 3));
    CHECK(r2.decision == Decision::Reject);
    CHECK(r2.max_probability == R(1, 7));

    PathOutcome<RationalInterval> straddle;
    straddle.probability = RationalInterval(R(14, 100), R(17, 100));
    auto r3 = decide<RationalInterval>({straddle}, R(155, 1000));
    CHECK(r3.decision == Decision::Inconclusive);

    CHECK_THROWS_AS(decide<R>({}, R(1, 2)), Error);
    CHECK_THROWS_AS(decide<R>({}, R(-1, 10)), Error);
    CHECK(decide<R>({}, R(0)).decision == Decision::Reject); // no outcomes: max 0
}
