#pragma once

// Text front end for ScalarField.
//
// Grammar (EBNF):
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = ("+" | "-") unary | power ;
//   power   = primary [ "^" unary ] ;            (* right associative *)
//   primary = number | variable | "$" name
//           | func "(" expr ")" | "(" expr ")" ;
//   func    = "exp" | "log" | "sin" | "cos" ;
//   number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
//
// Variables are the names in the VariableTable (x1..xn, y1..yn, z for a
// Darboux chart). Parameters `$name` are substituted from the parameter map
// at parse time, so the result carries only numbers.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "darboux/chart.hpp"
#include "darboux/field.hpp"

namespace darboux {

using ParameterMap = std::map<std::string, double, std::less<>>;

class VariableTable {
 public:
  explicit VariableTable(std::vector<std::string> names) : names_(std::move(names)) {}

  static VariableTable darboux(const DarbouxChart& chart) { return VariableTable(chart.variable_names()); }
  /// x1..xn, y1..yn without z: coordinates on R^{2n}.
  static VariableTable even(int n);
  /// s1..sk: parameter space of a parametrized submanifold.
  static VariableTable parameters(int k);

  int size() const { return static_cast<int>(names_.size()); }
  int find(std::string_view name) const;  // -1 when absent
  const std::string& name(int slot) const { return names_.at(static_cast<std::size_t>(slot)); }

 private:
  std::vector<std::string> names_;
};

ScalarField parse_field(std::string_view source, const VariableTable& vars, const ParameterMap& params = {});
ScalarField parse_field(std::string_view source, const DarbouxChart& chart, const ParameterMap& params = {});

/// Pretty-prints an expression in the grammar above. Constants are written
/// with 17 significant digits so that re-parsing reproduces the same values.
/// Native nodes print as `<name>` and cannot be re-parsed.
std::string to_string(const ScalarField& f, const VariableTable& vars);

}  // namespace darboux
