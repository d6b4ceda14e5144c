#include "afav/machine_io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace afav {

namespace {

struct Token {
    std::string text;
    bool quoted = false;
};

// Splits one line into whitespace-separated tokens. 'x' quotes a single
// symbol character; an unquoted '#' starts a comment.
std::vector<Token> tokenize(const std::string& line, int lineno) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') break;
        if (c == '\'') {
            if (i + 2 >= line.size() || line[i + 2] != '\'')
                raise(ErrorKind::Syntax, "malformed quoted symbol", lineno);
            char sym = line[i + 1];
            if (sym == '\'') raise(ErrorKind::Syntax, "quote character cannot be a symbol", lineno);
            out.push_back({std::string(1, sym), true});
            i += 3;
            continue;
        }
        size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#' && line[i] != '\'')
            ++i;
        out.push_back({line.substr(start, i - start), false});
    }
    return out;
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
            return false;
    return true;
}

char parse_symbol(const Token& t, int lineno) {
    if (t.text.size() != 1)
        raise(ErrorKind::Syntax, "symbol must be a single character, got '" + t.text + "'", lineno);
    char c = t.text[0];
    if (!t.quoted && c == '#')
        raise(ErrorKind::Syntax, "'#' must be quoted to be used as a symbol", lineno);
    if (!std::isgraph(static_cast<unsigned char>(c)))
        raise(ErrorKind::Syntax, "symbol must be printable", lineno);
    return c;
}

uint32_t parse_affine_index(const std::string& t, size_t dim, int lineno) {
    if (t.size() < 2 || t[0] != 'e')
        raise(ErrorKind::Syntax, "expected affine state like e1, got '" + t + "'", lineno);
    size_t idx = 0;
    for (size_t i = 1; i < t.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(t[i])))
            raise(ErrorKind::Syntax, "expected affine state like e1, got '" + t + "'", lineno);
        idx = idx * 10 + static_cast<size_t>(t[i] - '0');
    }
    if (idx < 1 || idx > dim)
        raise(ErrorKind::Syntax,
              "affine state " + t + " out of range 1.." + std::to_string(dim), lineno);
    return static_cast<uint32_t>(idx - 1);
}

} // namespace

MachineSpec<Rational> parse_machine(std::string_view text) {
    MachineSpec<Rational> m;
    std::map<std::string, AffineOperator<Rational>> matrices;
    bool saw_machine = false, saw_classical = false, saw_affine = false, saw_alphabet = false;
    bool saw_initial = false, saw_accept_classical = false, saw_accept_affine = false;

    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;

    // When > 0, the next non-empty lines are matrix rows.
    std::string pending_matrix;
    size_t pending_rows = 0;
    std::vector<Rational> pending_entries;

    auto state_of = [&](const std::string& name, int ln) -> uint32_t {
        long idx = m.state_index(name);
        if (idx < 0) raise(ErrorKind::Syntax, "unknown classical state '" + name + "'", ln);
        return static_cast<uint32_t>(idx);
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto tokens = tokenize(line, lineno);
        if (tokens.empty()) continue;

        if (pending_rows > 0) {
            if (tokens.size() != m.affine_dim)
                raise(ErrorKind::Syntax,
                      "matrix " + pending_matrix + ": expected " + std::to_string(m.affine_dim) +
                          " scalars in row, got " + std::to_string(tokens.size()),
                      lineno);
            for (const auto& t : tokens) {
                try {
                    pending_entries.push_back(Rational::parse(t.text));
                } catch (const Error&) {
                    raise(ErrorKind::Syntax, "invalid scalar '" + t.text + "'", lineno);
                }
            }
            if (--pending_rows == 0) {
                AffineOperator<Rational> op(m.affine_dim);
                op.a = std::move(pending_entries);
                pending_entries.clear();
                long bad = first_invalid_column(op);
                if (bad >= 0)
                    raise(ErrorKind::Structural,
                          "matrix " + pending_matrix + ": column " + std::to_string(bad + 1) +
                              " does not sum to 1",
                          lineno);
                matrices.emplace(pending_matrix, std::move(op));
            }
            continue;
        }

        const std::string& kw = tokens[0].text;
        if (tokens[0].quoted) raise(ErrorKind::Syntax, "unexpected quoted token", lineno);

        if (kw == "machine") {
            if (saw_machine) raise(ErrorKind::Syntax, "duplicate 'machine' directive", lineno);
            if (tokens.size() != 2 || !valid_name(tokens[1].text))
                raise(ErrorKind::Syntax, "expected: machine <name>", lineno);
            m.name = tokens[1].text;
            saw_machine = true;
        } else if (kw == "classical") {
            if (saw_classical) raise(ErrorKind::Syntax, "duplicate 'classical' directive", lineno);
            if (tokens.size() < 2) raise(ErrorKind::Syntax, "expected: classical <name>...", lineno);
            for (size_t i = 1; i < tokens.size(); ++i) {
                if (!valid_name(tokens[i].text))
                    raise(ErrorKind::Syntax, "bad state name '" + tokens[i].text + "'", lineno);
                if (m.state_index(tokens[i].text) >= 0)
                    raise(ErrorKind::Syntax, "duplicate state name '" + tokens[i].text + "'", lineno);
                m.classical_names.push_back(tokens[i].text);
            }
            saw_classical = true;
        } else if (kw == "affine") {
            if (saw_affine) raise(ErrorKind::Syntax, "duplicate 'affine' directive", lineno);
            if (tokens.size() != 2) raise(ErrorKind::Syntax, "expected: affine <m>", lineno);
            int v = 0;
            try {
                v = std::stoi(tokens[1].text);
            } catch (...) {
                v = 0;
            }
            if (v < 1) raise(ErrorKind::Syntax, "affine dimension must be >= 1", lineno);
            m.affine_dim = static_cast<size_t>(v);
            saw_affine = true;
        } else if (kw == "alphabet") {
            if (saw_alphabet) raise(ErrorKind::Syntax, "duplicate 'alphabet' directive", lineno);
            for (size_t i = 1; i < tokens.size(); ++i) {
                char c = parse_symbol(tokens[i], lineno);
                if (c == kLeftMarker || c == kRightMarker)
                    raise(ErrorKind::Syntax,
                          std::string("'") + c + "' is a reserved end-marker", lineno);
                if (m.in_alphabet(c))
                    raise(ErrorKind::Syntax, std::string("duplicate symbol '") + c + "'", lineno);
                m.alphabet.push_back(c);
            }
            saw_alphabet = true;
        } else if (kw == "initial") {
            if (!saw_classical || !saw_affine)
                raise(ErrorKind::Syntax, "'initial' must follow 'classical' and 'affine'", lineno);
            if (saw_initial) raise(ErrorKind::Syntax, "duplicate 'initial' directive", lineno);
            if (tokens.size() != 3) raise(ErrorKind::Syntax, "expected: initial <state> <e_k>", lineno);
            m.initial_classical = state_of(tokens[1].text, lineno);
            m.initial_affine = parse_affine_index(tokens[2].text, m.affine_dim, lineno);
            saw_initial = true;
        } else if (kw == "accept-classical") {
            if (!saw_classical) raise(ErrorKind::Syntax, "'accept-classical' must follow 'classical'", lineno);
            if (saw_accept_classical) raise(ErrorKind::Syntax, "duplicate 'accept-classical'", lineno);
            if (tokens.size() != 2) raise(ErrorKind::Syntax, "expected: accept-classical <state>", lineno);
            m.accept_classical = state_of(tokens[1].text, lineno);
            saw_accept_classical = true;
        } else if (kw == "accept-affine") {
            if (!saw_affine) raise(ErrorKind::Syntax, "'accept-affine' must follow 'affine'", lineno);
            if (saw_accept_affine) raise(ErrorKind::Syntax, "duplicate 'accept-affine'", lineno);
            for (size_t i = 1; i < tokens.size(); ++i) {
                uint32_t idx = parse_affine_index(tokens[i].text, m.affine_dim, lineno);
                if (std::find(m.accept_affine.begin(), m.accept_affine.end(), idx) !=
                    m.accept_affine.end())
                    raise(ErrorKind::Syntax, "duplicate accepting affine state", lineno);
                m.accept_affine.push_back(idx);
            }
            std::sort(m.accept_affine.begin(), m.accept_affine.end());
            saw_accept_affine = true;
        } else if (kw == "matrix") {
            if (!saw_affine) raise(ErrorKind::Syntax, "'matrix' must follow 'affine'", lineno);
            if (tokens.size() != 3 || !valid_name(tokens[1].text))
                raise(ErrorKind::Syntax, "expected: matrix <name> <m>x<m>", lineno);
            if (matrices.count(tokens[1].text))
                raise(ErrorKind::Syntax, "duplicate matrix name '" + tokens[1].text + "'", lineno);
            std::string dims = std::to_string(m.affine_dim) + "x" + std::to_string(m.affine_dim);
            if (tokens[2].text != dims)
                raise(ErrorKind::Syntax,
                      "matrix " + tokens[1].text + " must be " + dims + ", got " + tokens[2].text,
                      lineno);
            pending_matrix = tokens[1].text;
            pending_rows = m.affine_dim;
            pending_entries.clear();
            pending_entries.reserve(m.affine_dim * m.affine_dim);
        } else if (kw == "trans") {
            if (!saw_classical || !saw_affine)
                raise(ErrorKind::Syntax, "'trans' must follow 'classical' and 'affine'", lineno);
            if (tokens.size() != 6 || tokens[3].text != "->" || tokens[3].quoted)
                raise(ErrorKind::Syntax, "expected: trans <state> <symbol> -> <state> <matrix>", lineno);
            uint32_t from = state_of(tokens[1].text, lineno);
            char symbol = parse_symbol(tokens[2], lineno);
            if (symbol != kLeftMarker && symbol != kRightMarker && !m.in_alphabet(symbol))
                raise(ErrorKind::Syntax, std::string("symbol '") + symbol + "' not in alphabet", lineno);
            uint32_t to = state_of(tokens[4].text, lineno);
            auto it = matrices.find(tokens[5].text);
            if (it == matrices.end())
                raise(ErrorKind::Syntax, "unknown matrix '" + tokens[5].text + "'", lineno);
            auto& arms = m.arms_mut(from, symbol);
            if (arms.size() >= kMaxArms)
                raise(ErrorKind::Syntax, "too many choices for one (state, symbol)", lineno);
            arms.push_back({to, it->second});
        } else {
            raise(ErrorKind::Syntax, "unknown directive '" + kw + "'", lineno);
        }
    }

    if (pending_rows > 0)
        raise(ErrorKind::Syntax, "matrix " + pending_matrix + " is missing rows", lineno);
    if (!saw_machine) raise(ErrorKind::Syntax, "missing 'machine' directive", lineno);
    if (!saw_classical) raise(ErrorKind::Syntax, "missing 'classical' directive", lineno);
    if (!saw_affine) raise(ErrorKind::Syntax, "missing 'affine' directive", lineno);
    if (!saw_alphabet) raise(ErrorKind::Syntax, "missing 'alphabet' directive", lineno);
    if (!saw_initial) raise(ErrorKind::Syntax, "missing 'initial' directive", lineno);
    if (!saw_accept_classical) raise(ErrorKind::Syntax, "missing 'accept-classical' directive", lineno);
    if (!saw_accept_affine) raise(ErrorKind::Syntax, "missing 'accept-affine' directive", lineno);

    validate_machine(m);
    return m;
}

namespace {

std::string symbol_text(char c) {
    if (c == '#' || c == '\'') return std::string("'") + c + "'";
    return std::string(1, c);
}

} // namespace

std::string format_matrix_block(const std::string& name, const AffineOperator<Rational>& op) {
    std::string out = "matrix " + name + " " + std::to_string(op.dim) + "x" + std::to_string(op.dim) + "\n";
    for (size_t r = 0; r < op.dim; ++r) {
        for (size_t c = 0; c < op.dim; ++c) {
            if (c > 0) out += ' ';
            out += op.at(r, c).str();
        }
        out += '\n';
    }
    return out;
}

std::string emit_machine(const MachineSpec<Rational>& m) {
    validate_machine(m);
    std::string out;
    out += "machine " + m.name + "\n";
    out += "classical";
    for (const auto& s : m.classical_names) out += " " + s;
    out += "\n";
    out += "affine " + std::to_string(m.affine_dim) + "\n";
    out += "alphabet";
    for (char c : m.alphabet) out += " " + symbol_text(c);
    out += "\n";
    out += "initial " + m.classical_names[m.initial_classical] + " e" +
           std::to_string(m.initial_affine + 1) + "\n";
    out += "accept-classical " + m.classical_names[m.accept_classical] + "\n";
    out += "accept-affine";
    for (uint32_t e : m.accept_affine) out += " e" + std::to_string(e + 1);
    out += "\n";

    // Matrices are deduplicated by value, named in first-use order.
    std::vector<const AffineOperator<Rational>*> ops;
    auto op_name = [&](const AffineOperator<Rational>& op) -> std::string {
        for (size_t i = 0; i < ops.size(); ++i)
            if (*ops[i] == op) return "M" + std::to_string(i + 1);
        ops.push_back(&op);
        return "M" + std::to_string(ops.size());
    };
    std::string trans_lines;
    for (const auto& [key, arms] : m.transitions) {
        const auto& [state, symbol] = key;
        for (const auto& arm : arms) {
            trans_lines += "trans " + m.classical_names[state] + " " + symbol_text(symbol) + " -> " +
                           m.classical_names[arm.next] + " " + op_name(arm.op) + "\n";
        }
    }
    for (size_t i = 0; i < ops.size(); ++i)
        out += format_matrix_block("M" + std::to_string(i + 1), *ops[i]);
    out += trans_lines;
    return out;
}

std::string emit_machine(const MachineSpec<RationalInterval>&) {
    raise(ErrorKind::Serialization,
          "interval-valued machines are not serializable; emit requires exact rational entries");
}

} // namespace afav
