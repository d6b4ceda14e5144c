// afav: build, serialize, run, and cross-check affine automata verifiers.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "afav/machine_io.hpp"
#include "afav/oracles.hpp"
#include "afav/protocols.hpp"
#include "afav/report.hpp"

namespace {

using namespace afav;
using R = Rational;

// Exit codes: 0 accept, 1 reject, 2 inconclusive, then one code per error
// class, 11 for an oracle disagreement under --check.
constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitCheckMismatch = 11;
constexpr int kExitInternal = 12;
constexpr int kExitUsage = 13;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Syntax: return 3;
        case ErrorKind::Structural: return 4;
        case ErrorKind::Parameter: return 5;
        case ErrorKind::Configuration: return 6;
        case ErrorKind::Resource: return 7;
        case ErrorKind::Precision: return 8;
        case ErrorKind::Serialization: return 9;
        case ErrorKind::Io: return 10;
    }
    return kExitInternal;
}

int exit_code_for(Decision d) {
    switch (d) {
        case Decision::Accept: return kExitAccept;
        case Decision::Reject: return kExitReject;
        case Decision::Inconclusive: return kExitInconclusive;
    }
    return kExitInternal;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorKind::Io, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorKind::Io, "cannot write '" + path + "'");
    out << content;
}

struct RunFlags {
    bool no_dedup = false;
    bool prune = false;
    bool json = false;
    bool list_paths = false;
    bool check = false;
    size_t budget = 0; // 0 = default/env
    int threads = 0;
    std::string epsilon; // empty = command default

    void attach(CLI::App* cmd, bool with_prune = true) {
        cmd->add_flag("--no-dedup", no_dedup, "materialize the full path tree (no merging)");
        if (with_prune) cmd->add_flag("--prune", prune, "enable the certified path cut");
        cmd->add_flag("--json", json, "print the report as JSON");
        cmd->add_flag("--list-paths", list_paths, "include one line per surviving path");
        cmd->add_option("--budget", budget, "live-configuration budget (default 2^22 or AFAV_BUDGET)");
        cmd->add_option("--threads", threads, "worker threads (0 = all)");
        cmd->add_option("--epsilon", epsilon, "error bound as a rational in [0, 1/2)");
    }

    template <class S>
    EnumerateOptions<S> engine_options() const {
        EnumerateOptions<S> opt;
        opt.dedup = !no_dedup;
        if (budget > 0) opt.budget = budget;
        opt.threads = threads;
        return opt;
    }
};

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

template <class S>
int finish_run(const MachineSpec<S>& m, const std::string& input, const R& eps,
               const VerificationResult<S>& result, const RunFlags& flags, const Timer& timer,
               std::optional<bool> oracle_member = std::nullopt) {
    RunReport report = make_report(m, input, eps, result, flags.list_paths);
    bool mismatch = false;
    if (oracle_member) {
        report.oracle = *oracle_member ? "member" : "non-member";
        bool agree = (*oracle_member && result.decision == Decision::Accept) ||
                     (!*oracle_member && result.decision == Decision::Reject);
        report.agreement = agree;
        mismatch = !agree;
    }
    std::cout << (flags.json ? render_json(report) : render_text(report));
    std::cerr << "time=" << timer.ms() << "ms paths=" << result.outcomes.size() << "\n";
    if (mismatch) return kExitCheckMismatch;
    return exit_code_for(result.decision);
}

R parse_epsilon(const RunFlags& flags, R fallback) {
    return flags.epsilon.empty() ? fallback : R::parse(flags.epsilon);
}

int cmd_run(const std::string& machine_path, const std::string& input, const RunFlags& flags) {
    auto m = parse_machine(read_file(machine_path));
    if (flags.prune)
        raise(ErrorKind::Parameter,
              "no certified pruning hook exists for machine files; `unary --prune` has one");
    R eps = parse_epsilon(flags, R(1, 3));
    Timer timer;
    auto result = run_verification(m, input, eps, flags.engine_options<R>());
    return finish_run(m, input, eps, result, flags, timer);
}

int cmd_subsetsum(int64_t t, const std::string& input, const RunFlags& flags) {
    auto m = build_subsetsum_verifier(AmplificationParam(t));
    R eps = parse_epsilon(flags, AmplificationParam(t).error_bound());
    Timer timer;
    auto result = run_verification(m, input, eps, flags.engine_options<R>());
    std::optional<bool> oracle;
    if (flags.check)
        oracle = input.find('#') != std::string::npos &&
                 subsetsum_membership(SubsetSumInstance::parse(input));
    return finish_run(m, input, eps, result, flags, timer, oracle);
}

int cmd_usquare(int64_t t, uint64_t n, const RunFlags& flags) {
    auto m = build_usquare_verifier(AmplificationParam(t));
    R eps = parse_epsilon(flags, AmplificationParam(t).error_bound());
    std::string input(n, '0');
    Timer timer;
    auto result = run_verification(m, input, eps, flags.engine_options<R>());
    std::optional<bool> oracle;
    if (flags.check) oracle = perfect_square(n);
    return finish_run(m, input, eps, result, flags, timer, oracle);
}

int cmd_upoly(const std::string& coeffs, int64_t t, uint64_t n, const RunFlags& flags) {
    PolynomialSpec p = PolynomialSpec::parse(coeffs);
    auto m = build_upoly_verifier(p, AmplificationParam(t));
    R eps = parse_epsilon(flags, AmplificationParam(t).error_bound());
    std::string input(n, '0');
    Timer timer;
    auto result = run_verification(m, input, eps, flags.engine_options<R>());
    std::optional<bool> oracle;
    if (flags.check) oracle = poly_image_member(p, n);
    return finish_run(m, input, eps, result, flags, timer, oracle);
}

int cmd_unary(const std::string& lang_path, uint64_t n, const std::string& k_text,
              uint64_t precision, const RunFlags& flags) {
    UnaryLanguageSpec lang = UnaryLanguageSpec::parse_file(read_file(lang_path));
    if (precision > 0) lang.truncation = precision;
    R k = k_text.empty() ? suggest_unary_k(lang.base) : R::parse(k_text);
    UnaryVerifierConfig cfg(lang, k);
    R eps = parse_epsilon(flags, default_unary_error(lang.base));
    std::string input(n, 'a');
    std::optional<bool> oracle;
    if (flags.check) oracle = lang.bit(n);

    Timer timer;
    if (lang.backend == UnaryLanguageSpec::Backend::Periodic) {
        auto m = build_unary_verifier(cfg);
        auto opt = flags.engine_options<R>();
        if (flags.prune) opt.prune = unary_prune_hook<R>();
        auto result = run_verification(m, input, eps, opt);
        return finish_run(m, input, eps, result, flags, timer, oracle);
    }
    auto m = build_unary_verifier_interval(cfg);
    auto opt = flags.engine_options<RationalInterval>();
    if (flags.prune) opt.prune = unary_prune_hook<RationalInterval>();
    auto result = run_verification(m, input, eps, opt);
    return finish_run(m, input, eps, result, flags, timer, oracle);
}

int cmd_gadget(const std::string& kind, const std::string& w, uint64_t steps,
               const std::string& coeffs, const std::string& variant) {
    Gadget g;
    if (kind == "binary") {
        g = binary_encoding();
    } else if (kind == "count1") {
        g = counting_method1();
    } else if (kind == "count2") {
        g = counting_method2();
    } else if (kind == "square") {
        if (variant == "tensor") g = square_gadget(SquareVariant::Tensor);
        else if (variant == "dim4" || variant.empty()) g = square_gadget(SquareVariant::Dim4);
        else if (variant == "dim4alt") g = square_gadget(SquareVariant::Dim4Alt);
        else if (variant == "dim3") g = square_gadget(SquareVariant::Dim3);
        else raise(ErrorKind::Parameter, "unknown square variant '" + variant + "'");
    } else if (kind == "poly") {
        if (coeffs.empty()) raise(ErrorKind::Parameter, "poly gadget needs --coeffs c0,c1,...");
        g = polynomial_gadget(PolynomialSpec::parse(coeffs));
    } else {
        raise(ErrorKind::Parameter, "unknown gadget '" + kind + "'");
    }

    std::string out;
    for (const auto& [name, op] : g.operators) out += format_matrix_block(name, op);
    out += "value-entry e" + std::to_string(g.value_index + 1) + "\n";

    auto show = [&](const AffineVector<R>& v, size_t i) {
        out += "v[" + std::to_string(i) + "] = (";
        for (size_t j = 0; j < v.dim(); ++j) {
            if (j > 0) out += " ";
            out += v[j].str();
        }
        out += ")\n";
    };

    if (kind == "binary" && !w.empty()) {
        AffineVector<R> v = g.initial;
        show(v, 0);
        for (size_t i = 0; i < w.size(); ++i) {
            if (w[i] != '0' && w[i] != '1') raise(ErrorKind::Parameter, "--w must be a bit string");
            v = apply(g.operators[static_cast<size_t>(w[i] - '0')].second, v);
            show(v, i + 1);
        }
    } else if (steps > 0) {
        AffineVector<R> v = g.initial;
        show(v, 0);
        for (size_t i = 1; i <= steps; ++i) {
            v = apply(g.operators[0].second, v);
            show(v, i);
        }
    }
    std::cout << out;
    return 0;
}

int cmd_emit(const std::string& what, int64_t t, const std::string& coeffs,
             const std::string& lang_path, const std::string& k_text, const std::string& out_path) {
    MachineSpec<R> m;
    if (what == "subsetsum") {
        m = build_subsetsum_verifier(AmplificationParam(t));
    } else if (what == "usquare") {
        m = build_usquare_verifier(AmplificationParam(t));
    } else if (what == "upoly") {
        if (coeffs.empty()) raise(ErrorKind::Parameter, "emit upoly needs --coeffs");
        m = build_upoly_verifier(PolynomialSpec::parse(coeffs), AmplificationParam(t));
    } else if (what == "unary") {
        if (lang_path.empty()) raise(ErrorKind::Parameter, "emit unary needs --lang");
        UnaryLanguageSpec lang = UnaryLanguageSpec::parse_file(read_file(lang_path));
        R k = k_text.empty() ? suggest_unary_k(lang.base) : R::parse(k_text);
        UnaryVerifierConfig cfg(lang, k);
        if (lang.backend != UnaryLanguageSpec::Backend::Periodic) {
            // Surfaces the serialization error for oracle-backed machines.
            write_output(out_path, emit_machine(build_unary_verifier_interval(cfg)));
            return 0;
        }
        m = build_unary_verifier(cfg);
    } else {
        raise(ErrorKind::Parameter, "unknown protocol '" + what + "'");
    }
    write_output(out_path, emit_machine(m));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"affine automata verification workbench"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a machine file on an input");
    std::string run_file, run_input;
    RunFlags run_flags;
    run->add_option("machine", run_file, "machine-definition file")->required();
    run->add_option("--input", run_input, "input string over the machine's alphabet");
    run_flags.attach(run);

    // subsetsum
    auto* sub = app.add_subcommand("subsetsum", "build and run the subset-sum verifier");
    int64_t sub_t = 1;
    std::string sub_input;
    RunFlags sub_flags;
    sub->add_option("--t", sub_t, "amplification parameter (t >= 1)");
    sub->add_option("--input", sub_input, "instance S#B1#...#Bk over {0,1,#}");
    sub->add_flag("--check", sub_flags.check, "compare with the brute-force oracle");
    sub_flags.attach(sub, false);

    // usquare
    auto* usq = app.add_subcommand("usquare", "build and run the unary-squares verifier");
    int64_t usq_t = 1;
    uint64_t usq_n = 0;
    RunFlags usq_flags;
    usq->add_option("--t", usq_t, "amplification parameter (t >= 1)");
    usq->add_option("--n", usq_n, "input length l (input is 0^l)");
    usq->add_flag("--check", usq_flags.check, "compare with the integer oracle");
    usq_flags.attach(usq, false);

    // upoly
    auto* upo = app.add_subcommand("upoly", "build and run the unary polynomial-image verifier");
    int64_t upo_t = 1;
    uint64_t upo_n = 0;
    std::string upo_coeffs;
    RunFlags upo_flags;
    upo->add_option("--coeffs", upo_coeffs, "polynomial coefficients c0,c1,...")->required();
    upo->add_option("--t", upo_t, "amplification parameter (t >= 1)");
    upo->add_option("--n", upo_n, "input length l (input is 0^l)");
    upo->add_flag("--check", upo_flags.check, "compare with the integer oracle");
    upo_flags.attach(upo, false);

    // unary
    auto* una = app.add_subcommand("unary", "run the arbitrary-unary-language verifier");
    std::string una_lang, una_k;
    uint64_t una_n = 0, una_precision = 0;
    RunFlags una_flags;
    una->add_option("--lang", una_lang, "unary language spec file")->required();
    una->add_option("--n", una_n, "input length l (input is a^l)");
    una->add_option("--k", una_k, "end-marker amplification (rational; default derived from base)");
    una->add_option("--precision", una_precision, "oracle-backend truncation depth override");
    una->add_flag("--check", una_flags.check, "compare with the membership predicate");
    una_flags.attach(una);

    // gadget
    auto* gad = app.add_subcommand("gadget", "print an encoding gadget and its trajectory");
    std::string gad_kind, gad_w, gad_coeffs, gad_variant;
    uint64_t gad_steps = 0;
    gad->add_option("kind", gad_kind, "binary|count1|count2|square|poly")->required();
    gad->add_option("--w", gad_w, "bit string for the binary gadget");
    gad->add_option("--steps", gad_steps, "number of steps to trace");
    gad->add_option("--coeffs", gad_coeffs, "polynomial coefficients c0,c1,...");
    gad->add_option("--variant", gad_variant, "square variant: tensor|dim4|dim4alt|dim3");

    // emit
    auto* emi = app.add_subcommand("emit", "write a verifier as a machine-definition file");
    std::string emi_what, emi_coeffs, emi_lang, emi_k, emi_out;
    int64_t emi_t = 1;
    emi->add_option("protocol", emi_what, "subsetsum|usquare|upoly|unary")->required();
    emi->add_option("--t", emi_t, "amplification parameter");
    emi->add_option("--coeffs", emi_coeffs, "polynomial coefficients for upoly");
    emi->add_option("--lang", emi_lang, "unary language spec file");
    emi->add_option("--k", emi_k, "end-marker amplification for unary");
    emi->add_option("-o,--output", emi_out, "output file ('-' = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_file, run_input, run_flags);
        if (sub->parsed()) return cmd_subsetsum(sub_t, sub_input, sub_flags);
        if (usq->parsed()) return cmd_usquare(usq_t, usq_n, usq_flags);
        if (upo->parsed()) return cmd_upoly(upo_coeffs, upo_t, upo_n, upo_flags);
        if (una->parsed()) return cmd_unary(una_lang, una_n, una_k, una_precision, una_flags);
        if (gad->parsed()) return cmd_gadget(gad_kind, gad_w, gad_steps, gad_coeffs, gad_variant);
        if (emi->parsed()) return cmd_emit(emi_what, emi_t, emi_coeffs, emi_lang, emi_k, emi_out);
    } catch (const afav::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
