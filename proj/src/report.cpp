#include "afav/report.hpp"

#include <json.hpp>

namespace afav {

std::string probability_str(const Rational& p) {
    return p.str() + " (~" + p.decimal(10) + ")";
}

std::string probability_str(const RationalInterval& p) {
    if (p.is_point()) return probability_str(p.lo());
    return p.str();
}

std::string render_text(const RunReport& r) {
    std::string out;
    for (const auto& line : r.paths) {
        out += "path " + line.choices + " state=" + line.state + " p=" + line.probability;
        if (line.merged > 1) out += " merged=" + std::to_string(line.merged);
        out += "\n";
    }
    out += "max=" + r.max_probability + "\n";
    out += "decision=" + r.decision + "\n";
    if (r.oracle) {
        out += "oracle=" + *r.oracle + "\n";
        out += std::string("agreement=") + (r.agreement.value_or(false) ? "yes" : "no") + "\n";
    }
    return out;
}

std::string render_json(const RunReport& r) {
    nlohmann::json j;
    j["machine"] = r.machine;
    j["input"] = r.input;
    j["epsilon"] = r.epsilon;
    if (r.list_paths) {
        nlohmann::json paths = nlohmann::json::array();
        for (const auto& line : r.paths) {
            nlohmann::json p;
            p["choices"] = line.choices;
            p["state"] = line.state;
            p["p"] = line.probability;
            if (line.merged > 1) p["merged"] = line.merged;
            paths.push_back(std::move(p));
        }
        j["paths"] = std::move(paths);
    }
    j["max"] = r.max_probability;
    j["decision"] = r.decision;
    if (r.oracle) {
        j["oracle"] = *r.oracle;
        j["agreement"] = r.agreement.value_or(false);
    }
    return j.dump(2) + "\n";
}

} // namespace afav
