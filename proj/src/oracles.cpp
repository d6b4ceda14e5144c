#include "afav/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace afav {

SubsetSumInstance SubsetSumInstance::parse(std::string_view text) {
    SubsetSumInstance inst;
    inst.text = std::string(text);
    std::vector<mpz_class> values;
    mpz_class current = 0;
    size_t delimiters = 0;
    for (char c : text) {
        if (c == '#') {
            values.push_back(current);
            current = 0;
            ++delimiters;
        } else if (c == '0' || c == '1') {
            current = current * 2 + (c - '0');
        } else {
            raise(ErrorKind::Parameter,
                  std::string("subset-sum instance may contain only 0, 1, '#'; got '") + c + "'");
        }
    }
    values.push_back(current);
    if (delimiters == 0)
        raise(ErrorKind::Parameter, "subset-sum instance needs at least one '#'");
    inst.target = values.front();
    inst.blocks.assign(values.begin() + 1, values.end());
    return inst;
}

bool subsetsum_membership(const SubsetSumInstance& inst) {
    std::set<mpz_class> sums{mpz_class(0)};
    for (const mpz_class& b : inst.blocks) {
        std::set<mpz_class> next = sums;
        for (const mpz_class& s : sums) next.insert(s + b);
        sums = std::move(next);
        if (sums.count(inst.target)) return true;
    }
    return sums.count(inst.target) > 0;
}

mpz_class subsetsum_min_gap(const SubsetSumInstance& inst) {
    if (inst.blocks.size() > 24)
        raise(ErrorKind::Resource, "min-gap enumeration limited to 24 blocks, got " +
                                       std::to_string(inst.blocks.size()));
    std::set<mpz_class> sums{mpz_class(0)};
    for (const mpz_class& b : inst.blocks) {
        std::set<mpz_class> next = sums;
        for (const mpz_class& s : sums) next.insert(s + b);
        sums = std::move(next);
    }
    mpz_class best = -1;
    for (const mpz_class& s : sums) {
        mpz_class gap = ::abs(s - inst.target);
        if (best < 0 || gap < best) best = gap;
    }
    return best;
}

bool perfect_square(uint64_t l) {
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(l)));
    while (r > 0 && r * r > l) --r;
    while ((r + 1) * (r + 1) <= l) ++r;
    return r * r == l;
}

bool poly_image_member(const PolynomialSpec& p, uint64_t l) {
    mpz_class target(static_cast<unsigned long>(l));
    for (uint64_t i = 0;; ++i) {
        mpz_class v = p.evaluate(i);
        if (v == target) return true;
        if (v > target) return false; // non-negative coefficients: values only grow
    }
}

namespace {

template <class S>
void naive_walk(const MachineSpec<S>& m, const std::string& framed, size_t pos,
                const Configuration<S>& c, size_t budget, size_t& visited,
                std::vector<PathOutcome<S>>& out) {
    if (++visited > budget)
        raise(ErrorKind::Resource, "naive enumeration budget exceeded (" + std::to_string(budget) + ")");
    if (pos == framed.size()) {
        PathOutcome<S> o;
        o.choices = c.choices;
        o.classical = c.classical;
        o.probability = c.classical == m.accept_classical
                            ? weight(c.affine, std::span<const uint32_t>(m.accept_affine))
                            : S(0);
        out.push_back(std::move(o));
        return;
    }
    for (Configuration<S>& succ : step(m, c, framed[pos]))
        naive_walk(m, framed, pos + 1, succ, budget, visited, out);
}

} // namespace

template <class S>
std::vector<PathOutcome<S>> naive_enumerate(const MachineSpec<S>& m, std::string_view input,
                                            size_t budget) {
    for (char c : input) {
        if (c == kLeftMarker || c == kRightMarker)
            raise(ErrorKind::Parameter, std::string("input contains reserved marker '") + c + "'");
        if (!m.in_alphabet(c))
            raise(ErrorKind::Parameter, std::string("input symbol '") + c + "' not in machine alphabet");
    }
    std::string framed;
    framed += kLeftMarker;
    framed += input;
    framed += kRightMarker;
    std::vector<PathOutcome<S>> out;
    size_t visited = 0;
    naive_walk(m, framed, 0, initial_configuration(m), budget, visited, out);
    std::sort(out.begin(), out.end(),
              [](const PathOutcome<S>& a, const PathOutcome<S>& b) { return a.choices < b.choices; });
    return out;
}

template std::vector<PathOutcome<Rational>> naive_enumerate(const MachineSpec<Rational>&,
                                                            std::string_view, size_t);
template std::vector<PathOutcome<RationalInterval>> naive_enumerate(
    const MachineSpec<RationalInterval>&, std::string_view, size_t);

} // namespace afav
