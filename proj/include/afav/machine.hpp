#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "afav/affine.hpp"

namespace afav {

// Input framing markers. The input string itself may not contain them; every
// run processes left marker, input symbols, right marker in order.
inline constexpr char kLeftMarker = '^';
inline constexpr char kRightMarker = '$';

// At most this many nondeterministic choices per (state, symbol); choice
// indices render as one character each in path identifiers.
inline constexpr size_t kMaxArms = 36;

inline char choice_digit(size_t idx) {
    return idx < 10 ? static_cast<char>('0' + idx) : static_cast<char>('a' + idx - 10);
}

// Automaton with nondeterministic classical states and an affine register:
// (S, E, Sigma, delta, s_I, e_I, s_a, E_a). Classical states are indices into
// classical_names; affine states are 0-based entry indices.
template <class S>
struct MachineSpec {
    struct Arm {
        uint32_t next;         // classical successor
        AffineOperator<S> op;  // applied to the affine register
        bool operator==(const Arm& o) const { return next == o.next && op == o.op; }
    };

    std::string name;
    std::vector<std::string> classical_names;
    size_t affine_dim = 0;
    std::vector<char> alphabet; // excludes the two markers
    std::map<std::pair<uint32_t, char>, std::vector<Arm>> transitions;
    uint32_t initial_classical = 0;
    uint32_t initial_affine = 0;
    uint32_t accept_classical = 0;
    std::vector<uint32_t> accept_affine; // sorted, 0-based

    const std::vector<Arm>* arms(uint32_t state, char symbol) const {
        auto it = transitions.find({state, symbol});
        return it == transitions.end() ? nullptr : &it->second;
    }

    std::vector<Arm>& arms_mut(uint32_t state, char symbol) { return transitions[{state, symbol}]; }

    long state_index(const std::string& name_) const {
        for (size_t i = 0; i < classical_names.size(); ++i)
            if (classical_names[i] == name_) return static_cast<long>(i);
        return -1;
    }

    bool in_alphabet(char c) const {
        for (char a : alphabet)
            if (a == c) return true;
        return false;
    }

    AffineVector<S> initial_vector() const {
        AffineVector<S> v(std::vector<S>(affine_dim, S(0)));
        v[initial_affine] = S(1);
        return v;
    }

    bool operator==(const MachineSpec& o) const {
        return name == o.name && classical_names == o.classical_names &&
               affine_dim == o.affine_dim && alphabet == o.alphabet &&
               transitions == o.transitions && initial_classical == o.initial_classical &&
               initial_affine == o.initial_affine && accept_classical == o.accept_classical &&
               accept_affine == o.accept_affine;
    }
};

// Raises a structural/parameter error if the spec is malformed: bad indices,
// reserved or duplicate alphabet symbols, an operator of the wrong dimension,
// a column-sum violation, an empty transition set, or too many arms.
template <class S>
void validate_machine(const MachineSpec<S>& m) {
    if (m.classical_names.empty()) raise(ErrorKind::Structural, "machine has no classical states");
    if (m.affine_dim == 0) raise(ErrorKind::Structural, "machine has affine dimension 0");
    if (m.initial_classical >= m.classical_names.size() || m.accept_classical >= m.classical_names.size())
        raise(ErrorKind::Structural, "initial/accepting classical state out of range");
    if (m.initial_affine >= m.affine_dim) raise(ErrorKind::Structural, "initial affine state out of range");
    for (uint32_t e : m.accept_affine)
        if (e >= m.affine_dim) raise(ErrorKind::Structural, "accepting affine state out of range");
    for (size_t i = 0; i < m.alphabet.size(); ++i) {
        char c = m.alphabet[i];
        if (c == kLeftMarker || c == kRightMarker)
            raise(ErrorKind::Structural, std::string("alphabet contains reserved marker '") + c + "'");
        for (size_t j = i + 1; j < m.alphabet.size(); ++j)
            if (m.alphabet[j] == c)
                raise(ErrorKind::Structural, std::string("duplicate alphabet symbol '") + c + "'");
    }
    for (const auto& [key, arms] : m.transitions) {
        const auto& [state, symbol] = key;
        std::string where = "transition (" + m.classical_names.at(state) + ", '" + symbol + "')";
        if (state >= m.classical_names.size()) raise(ErrorKind::Structural, where + ": bad state");
        if (symbol != kLeftMarker && symbol != kRightMarker && !m.in_alphabet(symbol))
            raise(ErrorKind::Structural, where + ": symbol not in alphabet");
        if (arms.empty()) raise(ErrorKind::Structural, where + ": empty transition set");
        if (arms.size() > kMaxArms) raise(ErrorKind::Structural, where + ": too many choices");
        for (const auto& arm : arms) {
            if (arm.next >= m.classical_names.size())
                raise(ErrorKind::Structural, where + ": successor state out of range");
            if (arm.op.dim != m.affine_dim)
                raise(ErrorKind::Structural, where + ": operator dimension " +
                                                 std::to_string(arm.op.dim) + " != " +
                                                 std::to_string(m.affine_dim));
            long bad = first_invalid_column(arm.op);
            if (bad >= 0)
                raise(ErrorKind::Structural,
                      where + ": operator column " + std::to_string(bad + 1) + " does not sum to 1");
        }
    }
}

// A point of the computation tree: classical state, affine state, and the
// choice indices taken so far (recorded only at genuine branch points).
template <class S>
struct Configuration {
    uint32_t classical = 0;
    AffineVector<S> affine;
    std::string choices;
};

template <class S>
Configuration<S> initial_configuration(const MachineSpec<S>& m) {
    return Configuration<S>{m.initial_classical, m.initial_vector(), ""};
}

// One transition step: a successor per arm of delta(classical, symbol).
template <class S>
std::vector<Configuration<S>> step(const MachineSpec<S>& m, const Configuration<S>& c, char symbol) {
    const auto* arms = m.arms(c.classical, symbol);
    if (!arms)
        raise(ErrorKind::Configuration, "no transition from state '" +
                                            m.classical_names.at(c.classical) + "' on symbol '" +
                                            std::string(1, symbol) + "'");
    std::vector<Configuration<S>> out;
    out.reserve(arms->size());
    for (size_t i = 0; i < arms->size(); ++i) {
        const auto& arm = (*arms)[i];
        Configuration<S> succ;
        succ.classical = arm.next;
        succ.affine = apply(arm.op, c.affine);
        succ.choices = c.choices;
        if (arms->size() > 1) succ.choices += choice_digit(i);
        out.push_back(std::move(succ));
    }
    return out;
}

// Pointwise widening of an exact machine into interval scalars.
MachineSpec<RationalInterval> to_interval(const MachineSpec<Rational>& m);

} // namespace afav
