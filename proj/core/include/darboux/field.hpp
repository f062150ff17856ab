#pragma once

// Scalar and vector fields as immutable expression trees.
//
// A ScalarField is a function R^dim -> R built from constants, coordinate
// variables, arithmetic, integer/real powers, exp, log, sin and cos, plus an
// opaque "native" node for fields defined in code. Every node evaluates on
// doubles and on nested dual numbers, so gradients and Hessians are exact
// forward-mode derivatives of the expression.
//
// Native nodes dispatch through a fixed set of scalar types (double and up
// to three nested duals). Asking a native node for a deeper derivative
// throws DomainError.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "darboux/dual.hpp"
#include "darboux/errors.hpp"

namespace darboux {

/// Interface for fields implemented in code rather than as expression text.
class NativeFunction {
 public:
  virtual ~NativeFunction() = default;

  virtual double eval(std::span<const double> x) const = 0;
  virtual D1 eval(std::span<const D1> x) const = 0;
  virtual D2 eval(std::span<const D2> x) const = 0;
  virtual D3 eval(std::span<const D3> x) const = 0;

  virtual std::string name() const { return "native"; }
};

namespace detail {

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, PowInt, PowReal, Pow, Exp, Log, Sin, Cos, Native };

struct Node {
  Op op = Op::Const;
  double value = 0.0;  // constant value, or real exponent for PowReal
  int index = 0;       // variable slot, or integer exponent for PowInt
  std::vector<std::shared_ptr<const Node>> args;
  std::shared_ptr<const NativeFunction> native;
};

using NodePtr = std::shared_ptr<const Node>;

template <class T>
inline constexpr bool native_supported_v =
    std::is_same_v<T, double> || std::is_same_v<T, D1> || std::is_same_v<T, D2> || std::is_same_v<T, D3>;

template <class T>
T call_native(const NativeFunction& f, std::span<const T> x) {
  if constexpr (native_supported_v<T>) {
    return f.eval(x);
  } else {
    throw DomainError("native field '" + f.name() + "' does not support this derivative order");
  }
}

template <class T>
T eval_node(const Node& node, std::span<const T> x) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  switch (node.op) {
    case Op::Const:
      return T(node.value);
    case Op::Var:
      return x[node.index];
    case Op::Add:
      return eval_node(*node.args[0], x) + eval_node(*node.args[1], x);
    case Op::Sub:
      return eval_node(*node.args[0], x) - eval_node(*node.args[1], x);
    case Op::Mul:
      return eval_node(*node.args[0], x) * eval_node(*node.args[1], x);
    case Op::Div: {
      T den = eval_node(*node.args[1], x);
      if (value_of(den) == 0.0) throw DomainError("division by zero");
      return eval_node(*node.args[0], x) / den;
    }
    case Op::Neg:
      return -eval_node(*node.args[0], x);
    case Op::PowInt: {
      T base = eval_node(*node.args[0], x);
      if (node.index < 0 && value_of(base) == 0.0) throw DomainError("negative power of zero");
      return ipow(base, node.index);
    }
    case Op::PowReal: {
      T base = eval_node(*node.args[0], x);
      if (!(value_of(base) > 0.0)) throw DomainError("real power of a non-positive base");
      return rpow(base, node.value);
    }
    case Op::Pow: {
      T base = eval_node(*node.args[0], x);
      if (!(value_of(base) > 0.0)) throw DomainError("power with variable exponent needs a positive base");
      return exp(eval_node(*node.args[1], x) * log(base));
    }
    case Op::Exp:
      return exp(eval_node(*node.args[0], x));
    case Op::Log: {
      T a = eval_node(*node.args[0], x);
      if (!(value_of(a) > 0.0)) throw DomainError("log of a non-positive number");
      return log(a);
    }
    case Op::Sin:
      return sin(eval_node(*node.args[0], x));
    case Op::Cos:
      return cos(eval_node(*node.args[0], x));
    case Op::Native: {
      std::vector<T> a;
      a.reserve(node.args.size());
      for (const auto& arg : node.args) a.push_back(eval_node(*arg, x));
      return call_native<T>(*node.native, std::span<const T>(a));
    }
  }
  throw DomainError("corrupt expression node");
}

template <class F>
class GenericNative final : public NativeFunction {
 public:
  GenericNative(std::string name, F fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  double eval(std::span<const double> x) const override { return fn_(x); }
  D1 eval(std::span<const D1> x) const override { return fn_(x); }
  D2 eval(std::span<const D2> x) const override { return fn_(x); }
  D3 eval(std::span<const D3> x) const override { return fn_(x); }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  F fn_;
};

}  // namespace detail

class ScalarField {
 public:
  ScalarField() = default;

  static ScalarField constant(int dim, double c);
  static ScalarField coordinate(int dim, int slot);

  /// Wraps an object implementing NativeFunction over `dim` variables.
  static ScalarField native(int dim, std::shared_ptr<const NativeFunction> fn);

  /// Wraps a generic callable `fn(std::span<const T>) -> T` that must be
  /// instantiable for double, D1, D2 and D3.
  template <class F>
  static ScalarField from_function(int dim, std::string name, F fn) {
    return native(dim, std::make_shared<detail::GenericNative<F>>(std::move(name), std::move(fn)));
  }

  int dim() const { return dim_; }
  bool valid() const { return root_ != nullptr; }
  bool is_constant() const;
  /// Constant value; only meaningful when is_constant().
  double constant_value() const;

  template <class T>
  T eval(std::span<const T> x) const {
    if (static_cast<int>(x.size()) != dim_)
      throw DimensionError("field of dimension " + std::to_string(dim_) + " evaluated at a point of dimension " +
                           std::to_string(x.size()));
    return detail::eval_node(*root_, x);
  }
  template <class T>
  T eval(const std::vector<T>& x) const {
    return eval(std::span<const T>(x));
  }
  double operator()(const Eigen::VectorXd& x) const {
    return eval(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  }

  /// f(g_1, ..., g_dim): every variable slot i is replaced by args[i]. All
  /// args must share one dimension, which becomes the result's dimension.
  ScalarField compose(const std::vector<ScalarField>& args) const;

  const detail::Node& root() const { return *root_; }
  detail::NodePtr root_ptr() const { return root_; }

  // Internal constructor used by the parser and the operators.
  ScalarField(int dim, detail::NodePtr root) : dim_(dim), root_(std::move(root)) {}

 private:
  int dim_ = 0;
  detail::NodePtr root_;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator/(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a);
ScalarField operator+(const ScalarField& a, double c);
ScalarField operator+(double c, const ScalarField& a);
ScalarField operator-(const ScalarField& a, double c);
ScalarField operator-(double c, const ScalarField& a);
ScalarField operator*(const ScalarField& a, double c);
ScalarField operator*(double c, const ScalarField& a);
ScalarField operator/(const ScalarField& a, double c);
ScalarField pow(const ScalarField& a, int k);
ScalarField pow(const ScalarField& a, double c);
ScalarField pow(const ScalarField& a, const ScalarField& b);
ScalarField exp(const ScalarField& a);
ScalarField log(const ScalarField& a);
ScalarField sin(const ScalarField& a);
ScalarField cos(const ScalarField& a);

/// Components of a vector field (or, equally, of a one-form) in the
/// coordinate basis.
struct VectorFieldExpr {
  std::vector<ScalarField> components;

  int dim() const { return static_cast<int>(components.size()); }

  template <class T>
  std::vector<T> eval(std::span<const T> x) const {
    std::vector<T> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(c.eval(x));
    return out;
  }
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;

  /// Builds a field whose components are produced together by one generic
  /// callable `fn(std::span<const T>) -> std::vector<T>` (component i is
  /// extracted per evaluation).
  template <class F>
  static VectorFieldExpr from_function(int dim, std::string name, F fn) {
    VectorFieldExpr out;
    auto shared = std::make_shared<F>(std::move(fn));
    for (int i = 0; i < dim; ++i) {
      out.components.push_back(ScalarField::from_function(
          dim, name + "[" + std::to_string(i) + "]",
          [shared, i](auto x) { return (*shared)(x)[static_cast<std::size_t>(i)]; }));
    }
    return out;
  }

  static VectorFieldExpr constant(const Eigen::VectorXd& v);
};

// ---------------------------------------------------------------------------
// Forward-mode derivatives.

/// Seeds direction `dir` and returns the lifted point.
template <class T>
std::vector<Dual<T>> seed(std::span<const T> p, int dir) {
  std::vector<Dual<T>> q;
  q.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    q.emplace_back(p[i], static_cast<int>(i) == dir ? T(1.0) : T(0.0));
  return q;
}

template <class T>
std::vector<T> gradient(const ScalarField& f, std::span<const T> p) {
  std::vector<T> g;
  g.reserve(p.size());
  for (int i = 0; i < static_cast<int>(p.size()); ++i) {
    auto q = seed(p, i);
    g.push_back(f.eval(std::span<const Dual<T>>(q)).d);
  }
  return g;
}

/// Jacobian of a generic vector function, J[i][j] = d fn_i / d p_j.
/// fn must accept std::span<const Dual<T>> and return std::vector<Dual<T>>.
template <class T, class F>
std::vector<std::vector<T>> jacobian_of(F&& fn, std::span<const T> p) {
  std::vector<std::vector<T>> jac;
  for (int j = 0; j < static_cast<int>(p.size()); ++j) {
    auto q = seed(p, j);
    std::vector<Dual<T>> out = fn(std::span<const Dual<T>>(q));
    if (jac.empty()) jac.assign(out.size(), std::vector<T>(p.size(), T(0.0)));
    for (std::size_t i = 0; i < out.size(); ++i) jac[i][static_cast<std::size_t>(j)] = out[i].d;
  }
  return jac;
}

Eigen::VectorXd gradient(const ScalarField& f, const Eigen::VectorXd& p);
Eigen::MatrixXd hessian(const ScalarField& f, const Eigen::VectorXd& p);
Eigen::MatrixXd jacobian(const VectorFieldExpr& x, const Eigen::VectorXd& p);

/// Partial derivative d f / d x^slot as a new field.
ScalarField partial(const ScalarField& f, int slot);

inline std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace darboux
