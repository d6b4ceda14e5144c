#pragma once

#include <string_view>
#include <vector>

#include "afav/engine.hpp"
#include "afav/gadgets.hpp"

namespace afav {

// Brute-force references for the protocol machines. These deliberately use
// plain integer arithmetic and their own traversal code; they share no logic
// with the enumeration engine they are used to check.

struct SubsetSumInstance {
    mpz_class target;              // S
    std::vector<mpz_class> blocks; // B_1..B_k
    std::string text;              // original form

    // Parses "S#B1#...#Bk" over {0,1,#}; needs at least one '#'. Empty binary
    // strings read as 0.
    static SubsetSumInstance parse(std::string_view text);
};

// Exhaustive subset-sum decision over all 2^k sums (deduplicated set sweep).
bool subsetsum_membership(const SubsetSumInstance& inst);

// min over all subsets I of |S - S_I|; 0 exactly for members. k > 24 raises
// a resource error.
mpz_class subsetsum_min_gap(const SubsetSumInstance& inst);

bool perfect_square(uint64_t l);
bool poly_image_member(const PolynomialSpec& p, uint64_t l);

// Full-tree path enumeration with no dedup and no pruning: a small serial
// recursion, independent of the production engine. Outcomes come back in
// canonical (lexicographic-by-choices) order.
template <class S>
std::vector<PathOutcome<S>> naive_enumerate(const MachineSpec<S>& m, std::string_view input,
                                            size_t budget = default_budget());

extern template std::vector<PathOutcome<Rational>> naive_enumerate(const MachineSpec<Rational>&,
                                                                   std::string_view, size_t);
extern template std::vector<PathOutcome<RationalInterval>> naive_enumerate(
    const MachineSpec<RationalInterval>&, std::string_view, size_t);

} // namespace afav
