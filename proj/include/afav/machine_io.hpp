#pragma once

#include <string>
#include <string_view>

#include "afav/machine.hpp"

namespace afav {

// Machine-definition text format (line-oriented, UTF-8, '#' starts a comment
// except inside quoted symbols):
//
//   machine twocount
//   classical s1 s2
//   affine 3
//   alphabet 0 1 '#'
//   initial s1 e1
//   accept-classical s2
//   accept-affine e1 e3
//   matrix M1 3x3
//   1 0 0
//   1 1 0
//   -1 0 1
//   trans s1 '^' -> s1 M1
//   trans s1 0   -> s1 M1   # repeated lines = nondeterministic choices, in order
//
// Scalars use the text syntax of Rational::parse. Only rational-valued
// machines are serializable.

MachineSpec<Rational> parse_machine(std::string_view text);

std::string emit_machine(const MachineSpec<Rational>& m);
std::string emit_machine(const MachineSpec<RationalInterval>& m); // always raises Serialization

// Renders one operator as a "matrix <name> RxC" block; shared by `gadget`.
std::string format_matrix_block(const std::string& name, const AffineOperator<Rational>& op);

} // namespace afav
