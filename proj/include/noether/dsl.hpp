#pragma once

// Lagrangian DSL.
//
//   expr   := ["+"|"-"] term (("+"|"-") term)*
//   term   := factor (["*"] factor | "/" rational)*
//   factor := rational ["/" rational] | "i" | "m" ["^" int]
//           | "d[" label "]" factor | "lap" factor
//           | "g[" label "," label "]" | "delta[" label "," label "]"
//           | "x[" label "]" | "(" expr ")" | field
//   field  := identifier, with a directly attached "*" for the conjugate
//   label  := identifier | integer
//
// Derivative slots are lower indices and x[] is an upper index; g[] and
// delta[] pair with anything. A label repeated within a term is summed and
// must not pair two lower (or two upper) slots. `lap F` is the spatial
// Laplacian sum_{a=1}^{D-1} d[a] d[a] F.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "noether/tensor_expr.hpp"

namespace noether {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (at offset " + std::to_string(position) + ")"),
        position_(position), detail_(message) {}

  std::size_t position() const { return position_; }
  const std::string& detail() const { return detail_; }

private:
  std::size_t position_;
  std::string detail_;
};

/// Parses a DSL expression into canonical form. With `known_fields`, other identifiers are rejected.
Expr parse_expr(std::string_view text, int dim, const std::set<std::string>* known_fields = nullptr);

/// Parsed contents of a Lagrangian file.
///
///     # comment
///     dim 4
///     fields phi            (declares phi and phi*)
///     real A                (declares a real field)
///     generator t1 = 0, 1/2 ; 1/2, 0
///     L = g[mu,nu] d[mu] phi* * d[nu] phi - m^2 phi* phi
///
/// `L =` starts the Lagrangian, which runs to the end of the file.
struct LagrangianSource {
  int dim = 4;
  std::vector<std::string> fields;
  std::set<std::string> real_fields;
  std::vector<std::string> complex_base;  // declared complex fields without '*'
  std::map<std::string, std::vector<std::vector<ExactComplex>>> generators;
  Expr lagrangian{4};
};

LagrangianSource parse_lagrangian_source(std::string_view text);

/// "line L, column C" for an offset into text.
std::string describe_position(std::string_view text, std::size_t offset);

}  // namespace noether
