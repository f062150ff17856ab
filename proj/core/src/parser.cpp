#include "darboux/parser.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace darboux {

VariableTable VariableTable::even(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n; ++i) names.push_back("y" + std::to_string(i));
  return VariableTable(std::move(names));
}

VariableTable VariableTable::parameters(int k) {
  std::vector<std::string> names;
  for (int i = 1; i <= k; ++i) names.push_back("s" + std::to_string(i));
  return VariableTable(std::move(names));
}

int VariableTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

class Parser {
 public:
  Parser(std::string_view src, const VariableTable& vars, const ParameterMap& params)
      : src_(src), vars_(vars), params_(params) {}

  ScalarField parse() {
    skip_ws();
    if (pos_ >= src_.size()) fail(ParseError::Kind::Syntax, "empty expression");
    ScalarField e = expr();
    skip_ws();
    if (pos_ < src_.size()) fail(ParseError::Kind::Syntax, std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(ParseError::Kind kind, const std::string& msg) const { throw ParseError(kind, pos_, msg); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(ParseError::Kind::Syntax, std::string("expected '") + c + "'");
  }

  ScalarField expr() {
    ScalarField lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = lhs + term();
      else if (accept('-'))
        lhs = lhs - term();
      else
        return lhs;
    }
  }

  ScalarField term() {
    ScalarField lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = lhs * unary();
      else if (accept('/'))
        lhs = lhs / unary();
      else
        return lhs;
    }
  }

  ScalarField unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  ScalarField power() {
    ScalarField base = primary();
    if (accept('^')) return darboux::pow(base, unary());
    return base;
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  ScalarField primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail(ParseError::Kind::Syntax, "unexpected end of expression");
    const char c = src_[pos_];
    const int dim = vars_.size();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return ScalarField::constant(dim, number());
    if (c == '(') {
      ++pos_;
      ScalarField e = expr();
      expect(')');
      return e;
    }
    if (c == '$') {
      ++pos_;
      const std::size_t at = pos_;
      std::string name = identifier();
      if (name.empty()) fail(ParseError::Kind::Syntax, "expected parameter name after '$'");
      auto it = params_.find(name);
      if (it == params_.end()) throw ParseError(ParseError::Kind::UnknownIdentifier, at, "unknown parameter '$" + name + "'");
      return ScalarField::constant(dim, it->second);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t at = pos_;
      std::string name = identifier();
      skip_ws();
      const bool call = pos_ < src_.size() && src_[pos_] == '(';
      if (call) {
        if (name != "exp" && name != "log" && name != "sin" && name != "cos")
          throw ParseError(ParseError::Kind::UnknownIdentifier, at, "unknown function '" + name + "'");
        ++pos_;
        ScalarField arg = expr();
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == ',')
          fail(ParseError::Kind::Arity, "function '" + name + "' takes exactly one argument");
        expect(')');
        if (name == "exp") return darboux::exp(arg);
        if (name == "log") return darboux::log(arg);
        if (name == "sin") return darboux::sin(arg);
        return darboux::cos(arg);
      }
      if (name == "exp" || name == "log" || name == "sin" || name == "cos")
        throw ParseError(ParseError::Kind::Arity, at, "function '" + name + "' needs an argument");
      int slot = vars_.find(name);
      if (slot < 0) throw ParseError(ParseError::Kind::UnknownIdentifier, at, "unknown identifier '" + name + "'");
      return ScalarField::coordinate(dim, slot);
    }
    fail(ParseError::Kind::Syntax, std::string("unexpected '") + c + "'");
  }

  double number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    std::string text(src_.substr(start, pos_ - start));
    if (text == ".") {
      pos_ = start;
      fail(ParseError::Kind::Syntax, "malformed number");
    }
    return std::strtod(text.c_str(), nullptr);
  }

  std::string_view src_;
  const VariableTable& vars_;
  const ParameterMap& params_;
  std::size_t pos_ = 0;
};

// Precedence levels for printing: 1 sum, 2 product, 3 unary minus, 4 power, 5 atom.
struct Printed {
  std::string text;
  int prec;
};

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Printed print(const detail::Node& n, const VariableTable& vars) {
  using detail::Op;
  auto wrap = [](const Printed& p, int min_prec) { return p.prec < min_prec ? "(" + p.text + ")" : p.text; };
  switch (n.op) {
    case Op::Const: {
      std::string s = format_number(n.value);
      return {s, n.value < 0.0 || std::signbit(n.value) ? 3 : 5};
    }
    case Op::Var:
      return {vars.name(n.index), 5};
    case Op::Add:
      return {wrap(print(*n.args[0], vars), 1) + " + " + wrap(print(*n.args[1], vars), 2), 1};
    case Op::Sub:
      return {wrap(print(*n.args[0], vars), 1) + " - " + wrap(print(*n.args[1], vars), 2), 1};
    case Op::Mul:
      return {wrap(print(*n.args[0], vars), 2) + "*" + wrap(print(*n.args[1], vars), 3), 2};
    case Op::Div:
      return {wrap(print(*n.args[0], vars), 2) + "/" + wrap(print(*n.args[1], vars), 3), 2};
    case Op::Neg:
      return {"-" + wrap(print(*n.args[0], vars), 3), 3};
    case Op::PowInt:
      return {wrap(print(*n.args[0], vars), 5) + "^" + (n.index < 0 ? "(" + std::to_string(n.index) + ")" : std::to_string(n.index)), 4};
    case Op::PowReal: {
      std::string e = format_number(n.value);
      return {wrap(print(*n.args[0], vars), 5) + "^" + (n.value < 0.0 ? "(" + e + ")" : e), 4};
    }
    case Op::Pow:
      return {wrap(print(*n.args[0], vars), 5) + "^" + wrap(print(*n.args[1], vars), 4), 4};
    case Op::Exp:
      return {"exp(" + print(*n.args[0], vars).text + ")", 5};
    case Op::Log:
      return {"log(" + print(*n.args[0], vars).text + ")", 5};
    case Op::Sin:
      return {"sin(" + print(*n.args[0], vars).text + ")", 5};
    case Op::Cos:
      return {"cos(" + print(*n.args[0], vars).text + ")", 5};
    case Op::Native:
      return {"<" + n.native->name() + ">", 5};
  }
  return {"?", 5};
}

}  // namespace

ScalarField parse_field(std::string_view source, const VariableTable& vars, const ParameterMap& params) {
  return Parser(source, vars, params).parse();
}

ScalarField parse_field(std::string_view source, const DarbouxChart& chart, const ParameterMap& params) {
  return parse_field(source, VariableTable::darboux(chart), params);
}

std::string to_string(const ScalarField& f, const VariableTable& vars) {
  if (!f.valid()) return "";
  if (vars.size() != f.dim()) throw DimensionError("to_string: variable table does not match field dimension");
  return print(f.root(), vars).text;
}

}  // namespace darboux
