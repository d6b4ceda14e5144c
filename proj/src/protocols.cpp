#include "afav/protocols.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace afav {

namespace {

using R = Rational;
using Op = AffineOperator<Rational>;

// 4-state binary encoders: value accumulates in e_2 (e_3 untouched) or in
// e_3 (e_2 untouched); e_4 keeps the entry sum at 1.
Op subsetsum_encoder(int digit, bool into_e3) {
    Op m = Op::identity(4);
    size_t v = into_e3 ? 2 : 1;
    m.at(v, v) = R(2);
    m.at(3, v) = R(-1);
    if (digit == 1) {
        m.at(v, 0) = R(1);
        m.at(3, 0) = R(-1);
    }
    return m;
}

} // namespace

MachineSpec<Rational> build_subsetsum_verifier(const AmplificationParam& t) {
    MachineSpec<Rational> m;
    m.name = "subsetsum_t" + std::to_string(t.t);
    m.classical_names = {"start", "skip", "pick", "acc", "dead"};
    const uint32_t kStart = 0, kSkip = 1, kPick = 2, kAcc = 3, kDead = 4;
    m.affine_dim = 4;
    m.alphabet = {'0', '1', '#'};
    m.initial_classical = kStart;
    m.initial_affine = 0;
    m.accept_classical = kAcc;
    m.accept_affine = {0};

    Op id = Op::identity(4);
    Op enc_s0 = subsetsum_encoder(0, false);
    Op enc_s1 = subsetsum_encoder(1, false);
    Op enc_b0 = subsetsum_encoder(0, true);
    Op enc_b1 = subsetsum_encoder(1, true);

    // Subtracts e_3 from e_2 and clears e_3; closes out a picked block.
    Op settle = Op::from_rows({{R(1), R(0), R(0), R(0)},
                               {R(0), R(1), R(-1), R(0)},
                               {R(0), R(0), R(0), R(0)},
                               {R(0), R(0), R(2), R(1)}});
    // Multiplies the residue by t ahead of the weighting.
    Op amplify = Op::from_rows({{R(1), R(0), R(0), R(0)},
                                {R(0), R(t.t), R(0), R(0)},
                                {R(0), R(1 - t.t), R(1), R(1 - t.t)},
                                {R(0), R(0), R(0), R(t.t)}});
    Op amplify_settle = compose(amplify, settle);

    m.arms_mut(kStart, kLeftMarker) = {{kStart, id}};
    m.arms_mut(kStart, '0') = {{kStart, enc_s0}};
    m.arms_mut(kStart, '1') = {{kStart, enc_s1}};
    // Choice 0 skips the upcoming block, choice 1 picks it.
    m.arms_mut(kStart, '#') = {{kSkip, id}, {kPick, id}};
    m.arms_mut(kStart, kRightMarker) = {{kDead, id}}; // no '#': reject deterministically

    m.arms_mut(kSkip, '0') = {{kSkip, id}};
    m.arms_mut(kSkip, '1') = {{kSkip, id}};
    m.arms_mut(kSkip, '#') = {{kSkip, id}, {kPick, id}};
    m.arms_mut(kSkip, kRightMarker) = {{kAcc, amplify}};

    m.arms_mut(kPick, '0') = {{kPick, enc_b0}};
    m.arms_mut(kPick, '1') = {{kPick, enc_b1}};
    m.arms_mut(kPick, '#') = {{kSkip, settle}, {kPick, settle}};
    m.arms_mut(kPick, kRightMarker) = {{kAcc, amplify_settle}};

    validate_machine(m);
    return m;
}

namespace {

// Shared skeleton of the growth verifiers: on 0^l, the main path tracks the
// gadget state; at each symbol it may fork a side path that freezes the
// tracked value and keeps counting in e_2. The end-marker collapse maps a
// final state with counter c and frozen value p to (1, t(c-p), t(p-c), 0...).
MachineSpec<Rational> build_growth_verifier(std::string name, const Gadget& gadget,
                                            const AmplificationParam& t) {
    const size_t n = gadget.initial.dim();
    const size_t value_idx = gadget.value_index;

    MachineSpec<Rational> m;
    m.name = std::move(name);
    m.classical_names = {"pre", "first", "main", "cnt", "acc", "dead"};
    const uint32_t kPre = 0, kFirst = 1, kMain = 2, kCnt = 3, kAcc = 4, kDead = 5;
    m.affine_dim = n;
    m.alphabet = {'0'};
    m.initial_classical = kPre;
    m.initial_affine = 0;
    m.accept_classical = kAcc;
    m.accept_affine = {0};

    Op id = Op::identity(n);

    // Left marker injects the gadget's initial vector into column 1.
    Op inject = Op::identity(n);
    for (size_t r = 0; r < n; ++r) inject.at(r, 0) = gadget.initial[r];

    const Op& gstep = gadget.operators[0].second;

    // Counter step: e_2 += 1, everything else held, balance in the last row.
    Op count = Op::identity(n);
    count.at(1, 0) = R(1);
    count.at(n - 1, 0) += R(-1);

    // Collapse: all-ones first row restores the constant 1 from the entry
    // sum; rows 2 and 3 hold +-t times (counter - value); the rest zero out.
    Op collapse(n);
    for (size_t c = 0; c < n; ++c) collapse.at(0, c) = R(1);
    collapse.at(1, 1) = R(t.t);
    collapse.at(1, value_idx) = R(-t.t);
    collapse.at(2, 1) = R(-t.t);
    collapse.at(2, value_idx) = R(t.t);

    m.arms_mut(kPre, kLeftMarker) = {{kFirst, inject}};
    // Choice 0 continues the main path, choice 1 forks the checking path.
    m.arms_mut(kFirst, '0') = {{kMain, gstep}, {kCnt, gstep}};
    m.arms_mut(kFirst, kRightMarker) = {{kAcc, collapse}}; // empty input
    m.arms_mut(kMain, '0') = {{kMain, gstep}, {kCnt, gstep}};
    m.arms_mut(kMain, kRightMarker) = {{kDead, id}}; // main path rejects classically
    m.arms_mut(kCnt, '0') = {{kCnt, count}};
    m.arms_mut(kCnt, kRightMarker) = {{kAcc, collapse}};

    validate_machine(m);
    return m;
}

} // namespace

MachineSpec<Rational> build_usquare_verifier(const AmplificationParam& t) {
    return build_growth_verifier("usquare_t" + std::to_string(t.t), square_gadget(SquareVariant::Dim4),
                                 t);
}

MachineSpec<Rational> build_upoly_verifier(const PolynomialSpec& p, const AmplificationParam& t) {
    return build_growth_verifier(
        "upoly_d" + std::to_string(p.degree()) + "_t" + std::to_string(t.t), polynomial_gadget(p), t);
}

// --- unary languages ---------------------------------------------------------

UnaryLanguageSpec UnaryLanguageSpec::periodic(std::vector<uint8_t> pre, std::vector<uint8_t> per,
                                              int64_t base) {
    if (base < 32) raise(ErrorKind::Parameter, "base must be >= 32");
    if (per.empty()) raise(ErrorKind::Parameter, "period must be non-empty");
    for (uint8_t b : pre)
        if (b > 1) raise(ErrorKind::Parameter, "membership bits must be 0 or 1");
    for (uint8_t b : per)
        if (b > 1) raise(ErrorKind::Parameter, "membership bits must be 0 or 1");
    UnaryLanguageSpec lang;
    lang.backend = Backend::Periodic;
    lang.base = base;
    lang.preperiod = std::move(pre);
    lang.period = std::move(per);
    return lang;
}

UnaryLanguageSpec UnaryLanguageSpec::oracle(std::function<bool(uint64_t)> member, uint64_t truncation,
                                            int64_t base) {
    if (base < 32) raise(ErrorKind::Parameter, "base must be >= 32");
    if (truncation < 1) raise(ErrorKind::Parameter, "truncation depth must be >= 1");
    if (!member) raise(ErrorKind::Parameter, "missing membership predicate");
    UnaryLanguageSpec lang;
    lang.backend = Backend::Oracle;
    lang.base = base;
    lang.member = std::move(member);
    lang.truncation = truncation;
    return lang;
}

bool UnaryLanguageSpec::bit(uint64_t i) const {
    if (backend == Backend::Oracle) return member(i);
    if (i < preperiod.size()) return preperiod[i] != 0;
    return period[(i - preperiod.size()) % period.size()] != 0;
}

UnaryLanguageSpec UnaryLanguageSpec::parse_file(std::string_view text) {
    int64_t base = 32;
    std::optional<std::vector<uint8_t>> pre, per;
    std::optional<std::string> oracle_kind, oracle_arg;
    uint64_t truncation = 16;

    auto parse_bits = [](const std::string& s, int lineno) {
        std::vector<uint8_t> bits;
        for (char c : s) {
            if (c != '0' && c != '1')
                raise(ErrorKind::Syntax, "bitstring may contain only 0 and 1", lineno);
            bits.push_back(static_cast<uint8_t>(c - '0'));
        }
        return bits;
    };

    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "base") {
            if (!(ls >> base)) raise(ErrorKind::Syntax, "expected: base <B>", lineno);
        } else if (kw == "preperiod") {
            std::string bits;
            ls >> bits;
            pre = parse_bits(bits, lineno);
        } else if (kw == "period") {
            std::string bits;
            if (!(ls >> bits)) raise(ErrorKind::Syntax, "expected: period <bits>", lineno);
            per = parse_bits(bits, lineno);
        } else if (kw == "oracle") {
            std::string kind;
            if (!(ls >> kind)) raise(ErrorKind::Syntax, "expected: oracle squares|poly <coeffs>", lineno);
            oracle_kind = kind;
            std::string arg;
            if (ls >> arg) oracle_arg = arg;
        } else if (kw == "truncation") {
            if (!(ls >> truncation) || truncation < 1)
                raise(ErrorKind::Syntax, "expected: truncation <T>=1>", lineno);
        } else {
            raise(ErrorKind::Syntax, "unknown directive '" + kw + "'", lineno);
        }
        std::string extra;
        if (ls >> extra) raise(ErrorKind::Syntax, "trailing tokens after directive", lineno);
    }

    if (oracle_kind && (pre || per))
        raise(ErrorKind::Syntax, "language spec mixes periodic and oracle backends");
    if (oracle_kind) {
        if (*oracle_kind == "squares") {
            return oracle([](uint64_t l) {
                uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(l)));
                while (r * r > l) --r;
                while ((r + 1) * (r + 1) <= l) ++r;
                return r * r == l;
            }, truncation, base);
        }
        if (*oracle_kind == "poly") {
            if (!oracle_arg) raise(ErrorKind::Syntax, "oracle poly needs coefficients c0,c1,...");
            PolynomialSpec p = PolynomialSpec::parse(*oracle_arg);
            return oracle([p](uint64_t l) {
                mpz_class target(static_cast<unsigned long>(l));
                for (uint64_t i = 0;; ++i) {
                    mpz_class v = p.evaluate(i);
                    if (v == target) return true;
                    if (v > target) return false;
                }
            }, truncation, base);
        }
        raise(ErrorKind::Syntax, "unknown oracle '" + *oracle_kind + "' (expected squares|poly)");
    }
    if (!per) raise(ErrorKind::Syntax, "periodic language spec needs a 'period' line");
    return periodic(pre.value_or(std::vector<uint8_t>{}), *per, base);
}

Rational alpha_exact(const UnaryLanguageSpec& lang, uint64_t j) {
    if (lang.backend != UnaryLanguageSpec::Backend::Periodic)
        raise(ErrorKind::Parameter, "exact encoding requires the periodic backend");
    const mpz_class B(static_cast<long>(lang.base));
    const uint64_t u = lang.preperiod.size();
    const uint64_t q = lang.period.size();

    mpz_class bq;
    mpz_pow_ui(bq.get_mpz_t(), B.get_mpz_t(), static_cast<unsigned long>(q));
    mpz_class q_den = bq - 1;

    auto periodic_num = [&](uint64_t rot) {
        mpz_class acc = 0;
        for (uint64_t i = 0; i < q; ++i) acc = acc * B + lang.period[(rot + i) % q];
        return acc;
    };

    if (j >= u) return Rational(periodic_num((j - u) % q), q_den);

    const uint64_t head = u - j;
    mpz_class head_num = 0;
    for (uint64_t i = 0; i < head; ++i) head_num = head_num * B + lang.preperiod[j + i];
    mpz_class bhead;
    mpz_pow_ui(bhead.get_mpz_t(), B.get_mpz_t(), static_cast<unsigned long>(head));
    // alpha[j] = (head + alpha_periodic(0)) / B^head
    return Rational(head_num * q_den + periodic_num(0), bhead * q_den);
}

RationalInterval alpha_interval(const UnaryLanguageSpec& lang, uint64_t j, uint64_t truncation) {
    if (truncation < 1) raise(ErrorKind::Parameter, "truncation depth must be >= 1");
    const mpz_class B(static_cast<long>(lang.base));
    mpz_class num = 0;
    for (uint64_t i = 0; i < truncation; ++i) num = num * B + (lang.bit(j + i) ? 1 : 0);
    mpz_class bt;
    mpz_pow_ui(bt.get_mpz_t(), B.get_mpz_t(), static_cast<unsigned long>(truncation));
    Rational lo(num, bt);
    Rational tail(mpz_class(1), (B - 1) * bt);
    return RationalInterval(lo, lo + tail);
}

RationalInterval alpha_interval(const UnaryLanguageSpec& lang, uint64_t j) {
    return alpha_interval(lang, j, lang.truncation);
}

Rational unary_completeness_bound(const Rational& k, int64_t base) {
    return Rational(1) / (Rational(1) + Rational(2) * k / Rational(base - 1));
}

Rational unary_soundness_bound(const Rational& k, int64_t base) {
    return Rational(1) / (Rational(1) + Rational(2) * k * Rational(base - 2, base - 1));
}

Rational suggest_unary_k(int64_t base) {
    if (base < 32) raise(ErrorKind::Parameter, "base must be >= 32");
    // floor(10^4 sqrt(B-2)) underestimates the root, so k lands just above
    // the optimum (B-1)/(2 sqrt(B-2)); both bounds stay on the safe side.
    mpz_class scaled = mpz_class(static_cast<long>(base - 2)) * 100000000L;
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    return Rational(mpz_class(static_cast<long>(base - 1)) * 10000, 2 * root);
}

Rational default_unary_error(int64_t base) {
    if (base < 32) raise(ErrorKind::Parameter, "base must be >= 32");
    // least x/1000 with 1/(1+sqrt(B-2)) <= x/1000, i.e. (1000-x)^2 <= (B-2)x^2
    for (int64_t x = 1; x <= 1000; ++x) {
        if ((1000 - x) * (1000 - x) <= (base - 2) * x * x) return Rational(x, 1000);
    }
    return Rational(1, 2); // unreachable for base >= 3
}

UnaryVerifierConfig::UnaryVerifierConfig(UnaryLanguageSpec lang, Rational k_)
    : language(std::move(lang)), k(std::move(k_)) {
    Rational err = default_unary_error(language.base);
    completeness_target = Rational(1) - err;
    soundness_target = err;
    check_bounds();
}

UnaryVerifierConfig::UnaryVerifierConfig(UnaryLanguageSpec lang, Rational k_,
                                         Rational completeness_target_, Rational soundness_target_)
    : language(std::move(lang)),
      k(std::move(k_)),
      completeness_target(std::move(completeness_target_)),
      soundness_target(std::move(soundness_target_)) {
    check_bounds();
}

void UnaryVerifierConfig::check_bounds() const {
    if (k.sign() <= 0) raise(ErrorKind::Parameter, "k must be positive");
    if (!(unary_completeness_bound(k, language.base) >= completeness_target))
        raise(ErrorKind::Parameter,
              "k=" + k.str() + " violates the completeness inequality 1/(1+2k/(B-1)) >= " +
                  completeness_target.str());
    if (!(unary_soundness_bound(k, language.base) <= soundness_target))
        raise(ErrorKind::Parameter,
              "k=" + k.str() + " violates the soundness inequality 1/(1+2k(B-2)/(B-1)) <= " +
                  soundness_target.str());
}

namespace {

// Shared construction over the scalar kind; alpha is exact or an enclosure.
template <class S>
MachineSpec<S> build_unary_machine(std::string name, const S& alpha, const Rational& k, int64_t base) {
    MachineSpec<S> m;
    m.name = std::move(name);
    m.classical_names = {"s1", "s2"};
    const uint32_t kS1 = 0, kS2 = 1;
    m.affine_dim = 3;
    m.alphabet = {'a'};
    m.initial_classical = kS1;
    m.initial_affine = 0;
    m.accept_classical = kS2;
    m.accept_affine = {0};

    const S bm1 = S(base - 1); // B-1
    const S b = S(base);

    // Guess operators: e_2 -> B e_2 - g, mirrored in e_3.
    AffineOperator<S> guess0 = AffineOperator<S>::from_rows({{S(1), S(0) - bm1, S(0) - bm1},
                                                             {S(0), b, S(0)},
                                                             {S(0), S(0), b}});
    AffineOperator<S> guess1 = AffineOperator<S>::from_rows({{S(1), S(0) - bm1, S(0) - bm1},
                                                             {S(-1), b, S(0)},
                                                             {S(1), S(0), b}});
    // Left marker first injects (1, alpha, -alpha), then applies the guess.
    AffineOperator<S> inject = AffineOperator<S>::from_rows({{S(1), S(0), S(0)},
                                                             {alpha, S(1), S(0)},
                                                             {S(0) - alpha, S(0), S(1)}});
    AffineOperator<S> marker0 = compose(guess0, inject);
    AffineOperator<S> marker1 = compose(guess1, inject);

    const S ks = S(k);
    AffineOperator<S> finish = AffineOperator<S>::from_rows({{S(1), S(1) - ks, S(1) - ks},
                                                             {S(0), ks, S(0)},
                                                             {S(0), S(0), ks}});

    // Choice g in {0,1} sets the classical state to s1/s2.
    m.arms_mut(kS1, kLeftMarker) = {{kS1, marker0}, {kS2, marker1}};
    m.arms_mut(kS1, 'a') = {{kS1, guess0}, {kS2, guess1}};
    m.arms_mut(kS2, 'a') = {{kS1, guess0}, {kS2, guess1}};
    m.arms_mut(kS1, kRightMarker) = {{kS1, finish}};
    m.arms_mut(kS2, kRightMarker) = {{kS2, finish}};

    validate_machine(m);
    return m;
}

} // namespace

MachineSpec<Rational> build_unary_verifier(const UnaryVerifierConfig& cfg) {
    if (cfg.language.backend != UnaryLanguageSpec::Backend::Periodic)
        raise(ErrorKind::Parameter, "exact unary verifier requires the periodic backend");
    return build_unary_machine<Rational>("unary_b" + std::to_string(cfg.language.base),
                                         alpha_exact(cfg.language, 0), cfg.k, cfg.language.base);
}

MachineSpec<RationalInterval> build_unary_verifier_interval(const UnaryVerifierConfig& cfg) {
    RationalInterval alpha = cfg.language.backend == UnaryLanguageSpec::Backend::Periodic
                                 ? RationalInterval(alpha_exact(cfg.language, 0))
                                 : alpha_interval(cfg.language, 0);
    return build_unary_machine<RationalInterval>("unary_b" + std::to_string(cfg.language.base), alpha,
                                                 cfg.k, cfg.language.base);
}

} // namespace afav
