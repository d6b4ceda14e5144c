#pragma once

#include <optional>
#include <string>

#include "afav/engine.hpp"

namespace afav {

// Deterministic run report: path lines sorted by choice string, identical
// across runs and worker counts. Timing is kept out of the rendered report
// (the CLI prints it to stderr).
struct RunReport {
    struct PathLine {
        std::string choices; // "-" for the empty choice sequence
        std::string state;
        std::string probability;
        uint64_t merged = 1;
    };

    std::string machine;
    std::string input;
    std::string epsilon;
    std::vector<PathLine> paths;
    bool list_paths = false;
    std::string max_probability;
    std::string decision;
    std::optional<std::string> oracle;  // e.g. "member"
    std::optional<bool> agreement;      // engine vs oracle
};

// "155/1004 (~0.1543824701)" / "[1/33,1/31]"
std::string probability_str(const Rational& p);
std::string probability_str(const RationalInterval& p);

template <class S>
RunReport make_report(const MachineSpec<S>& m, std::string_view input, const Rational& epsilon,
                      const VerificationResult<S>& result, bool list_paths) {
    RunReport r;
    r.machine = m.name;
    r.input = std::string(input);
    r.epsilon = epsilon.str();
    r.list_paths = list_paths;
    if (list_paths) {
        r.paths.reserve(result.outcomes.size());
        for (const auto& o : result.outcomes)
            r.paths.push_back({o.choices.empty() ? "-" : o.choices,
                               m.classical_names.at(o.classical), probability_str(o.probability),
                               o.merged});
    }
    r.max_probability = probability_str(result.max_probability);
    r.decision = decision_name(result.decision);
    return r;
}

std::string render_text(const RunReport& r);
std::string render_json(const RunReport& r);

} // namespace afav
