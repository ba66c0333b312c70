#pragma once

// Text formats.
//
// Function file (line oriented, '#' starts a comment):
//
//   space <n>
//   coord <i> values <v1> <v2> ... weights <w1> <w2> ...
//   outputs <z1> <z2> ... discrete|boolean|rho1|rho2
//   outputs <z1> <z2> ... [metric|semimetric] dist <row-major |Z|x|Z| table>
//   values <one output label per point, canonical order>
//
// Numbers are "a/b" fractions or decimals. The values list may continue over
// several lines.
//
// Tree file:
//
//   tree   := "(" "leaf" label ")" | "(" "q" coordIndex branch+ ")"
//   branch := "(" value tree ")"
//
// with 1-based coordinate indices and value/output labels as in the function.

#include <string>
#include <string_view>

#include "dtinf/model.hpp"
#include "dtinf/tree.hpp"

namespace dtinf {

/// Throws ParseError (with a line number) on malformed input.
TabulatedFunction parse_function(std::string_view text,
                                 std::uint64_t cap = kDefaultEnumerationCap);
std::string format_function(const TabulatedFunction& f);

/// Throws ParseError on malformed input or labels unknown to `space`/`outputs`.
DecisionTree parse_tree(std::string_view text, const ProductSpace& space,
                        const OutputSpace& outputs);
std::string format_tree(const DecisionTree& tree, const ProductSpace& space,
                        const OutputSpace& outputs);

/// Reads a whole file; throws Error when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace dtinf
