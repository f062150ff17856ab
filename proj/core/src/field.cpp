#include "darboux/field.hpp"

#include <cmath>

namespace darboux {

using detail::Node;
using detail::NodePtr;
using detail::Op;

namespace {

NodePtr make_const(double c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = c;
  return n;
}

NodePtr make_op(Op op, std::vector<NodePtr> args) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

bool is_const(const NodePtr& n, double* value = nullptr) {
  if (n->op != Op::Const) return false;
  if (value) *value = n->value;
  return true;
}

void check_same_dim(const ScalarField& a, const ScalarField& b) {
  if (!a.valid() || !b.valid()) throw Error("operation on an empty ScalarField");
  if (a.dim() != b.dim())
    throw DimensionError("fields of dimension " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()) +
                         " cannot be combined");
}

// Builds a binary node, folding constants and the trivial identities
// a + 0, a * 1, a * 0 so reduced Hamiltonians print compactly.
NodePtr binary(Op op, const NodePtr& a, const NodePtr& b) {
  double va = 0.0;
  double vb = 0.0;
  const bool ca = is_const(a, &va);
  const bool cb = is_const(b, &vb);
  if (ca && cb) {
    switch (op) {
      case Op::Add:
        return make_const(va + vb);
      case Op::Sub:
        return make_const(va - vb);
      case Op::Mul:
        return make_const(va * vb);
      case Op::Div:
        if (vb != 0.0) return make_const(va / vb);
        break;
      default:
        break;
    }
  }
  switch (op) {
    case Op::Add:
      if (ca && va == 0.0) return b;
      if (cb && vb == 0.0) return a;
      break;
    case Op::Sub:
      if (cb && vb == 0.0) return a;
      if (ca && va == 0.0) return make_op(Op::Neg, {b});
      break;
    case Op::Mul:
      if ((ca && va == 0.0) || (cb && vb == 0.0)) return make_const(0.0);
      if (ca && va == 1.0) return b;
      if (cb && vb == 1.0) return a;
      break;
    case Op::Div:
      if (cb && vb == 1.0) return a;
      if (ca && va == 0.0 && !(cb && vb == 0.0)) return make_const(0.0);
      break;
    default:
      break;
  }
  return make_op(op, {a, b});
}

NodePtr unary(Op op, const NodePtr& a) {
  double v = 0.0;
  if (is_const(a, &v)) {
    switch (op) {
      case Op::Neg:
        return make_const(-v);
      case Op::Exp:
        return make_const(std::exp(v));
      case Op::Sin:
        return make_const(std::sin(v));
      case Op::Cos:
        return make_const(std::cos(v));
      case Op::Log:
        if (v > 0.0) return make_const(std::log(v));
        break;
      default:
        break;
    }
  }
  if (op == Op::Neg && a->op == Op::Neg) return a->args[0];
  return make_op(op, {a});
}

NodePtr pow_int(const NodePtr& a, int k) {
  double v = 0.0;
  if (k == 0) return make_const(1.0);
  if (k == 1) return a;
  if (is_const(a, &v) && !(v == 0.0 && k < 0)) return make_const(ipow(v, k));
  auto n = std::make_shared<Node>();
  n->op = Op::PowInt;
  n->index = k;
  n->args = {a};
  return n;
}

NodePtr substitute(const NodePtr& node, const std::vector<NodePtr>& args) {
  switch (node->op) {
    case Op::Const:
      return node;
    case Op::Var:
      return args[static_cast<std::size_t>(node->index)];
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      return binary(node->op, substitute(node->args[0], args), substitute(node->args[1], args));
    case Op::Pow:
      return make_op(Op::Pow, {substitute(node->args[0], args), substitute(node->args[1], args)});
    case Op::Neg:
    case Op::Exp:
    case Op::Log:
    case Op::Sin:
    case Op::Cos:
      return unary(node->op, substitute(node->args[0], args));
    case Op::PowInt:
      return pow_int(substitute(node->args[0], args), node->index);
    case Op::PowReal: {
      auto n = std::make_shared<Node>(*node);
      n->args = {substitute(node->args[0], args)};
      return n;
    }
    case Op::Native: {
      auto n = std::make_shared<Node>(*node);
      for (auto& a : n->args) a = substitute(a, args);
      return n;
    }
  }
  throw DomainError("corrupt expression node");
}

}  // namespace

ScalarField ScalarField::constant(int dim, double c) { return {dim, make_const(c)}; }

ScalarField ScalarField::coordinate(int dim, int slot) {
  if (slot < 0 || slot >= dim) throw DimensionError("coordinate slot out of range");
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->index = slot;
  return {dim, n};
}

ScalarField ScalarField::native(int dim, std::shared_ptr<const NativeFunction> fn) {
  auto n = std::make_shared<Node>();
  n->op = Op::Native;
  n->native = std::move(fn);
  for (int i = 0; i < dim; ++i) n->args.push_back(coordinate(dim, i).root_ptr());
  return {dim, n};
}

bool ScalarField::is_constant() const { return root_ && root_->op == Op::Const; }

double ScalarField::constant_value() const { return root_->value; }

ScalarField ScalarField::compose(const std::vector<ScalarField>& args) const {
  if (static_cast<int>(args.size()) != dim_)
    throw DimensionError("compose: expected " + std::to_string(dim_) + " arguments, got " +
                         std::to_string(args.size()));
  if (args.empty()) return *this;
  const int out_dim = args.front().dim();
  std::vector<NodePtr> nodes;
  for (const auto& a : args) {
    if (a.dim() != out_dim) throw DimensionError("compose: arguments have different dimensions");
    nodes.push_back(a.root_ptr());
  }
  return {out_dim, substitute(root_, nodes)};
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  check_same_dim(a, b);
  return {a.dim(), binary(Op::Add, a.root_ptr(), b.root_ptr())};
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  check_same_dim(a, b);
  return {a.dim(), binary(Op::Sub, a.root_ptr(), b.root_ptr())};
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  check_same_dim(a, b);
  return {a.dim(), binary(Op::Mul, a.root_ptr(), b.root_ptr())};
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  check_same_dim(a, b);
  return {a.dim(), binary(Op::Div, a.root_ptr(), b.root_ptr())};
}
ScalarField operator-(const ScalarField& a) { return {a.dim(), unary(Op::Neg, a.root_ptr())}; }
ScalarField operator+(const ScalarField& a, double c) { return a + ScalarField::constant(a.dim(), c); }
ScalarField operator+(double c, const ScalarField& a) { return ScalarField::constant(a.dim(), c) + a; }
ScalarField operator-(const ScalarField& a, double c) { return a - ScalarField::constant(a.dim(), c); }
ScalarField operator-(double c, const ScalarField& a) { return ScalarField::constant(a.dim(), c) - a; }
ScalarField operator*(const ScalarField& a, double c) { return a * ScalarField::constant(a.dim(), c); }
ScalarField operator*(double c, const ScalarField& a) { return ScalarField::constant(a.dim(), c) * a; }
ScalarField operator/(const ScalarField& a, double c) { return a / ScalarField::constant(a.dim(), c); }

ScalarField pow(const ScalarField& a, int k) { return {a.dim(), pow_int(a.root_ptr(), k)}; }

ScalarField pow(const ScalarField& a, double c) {
  if (std::floor(c) == c && std::abs(c) <= 64.0) return pow(a, static_cast<int>(c));
  auto n = std::make_shared<Node>();
  n->op = Op::PowReal;
  n->value = c;
  n->args = {a.root_ptr()};
  return {a.dim(), n};
}

ScalarField pow(const ScalarField& a, const ScalarField& b) {
  check_same_dim(a, b);
  if (b.is_constant()) return pow(a, b.constant_value());
  return {a.dim(), make_op(Op::Pow, {a.root_ptr(), b.root_ptr()})};
}

ScalarField exp(const ScalarField& a) { return {a.dim(), unary(Op::Exp, a.root_ptr())}; }
ScalarField log(const ScalarField& a) { return {a.dim(), unary(Op::Log, a.root_ptr())}; }
ScalarField sin(const ScalarField& a) { return {a.dim(), unary(Op::Sin, a.root_ptr())}; }
ScalarField cos(const ScalarField& a) { return {a.dim(), unary(Op::Cos, a.root_ptr())}; }

Eigen::VectorXd VectorFieldExpr::operator()(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(dim());
  for (int i = 0; i < dim(); ++i) out(i) = components[static_cast<std::size_t>(i)](x);
  return out;
}

VectorFieldExpr VectorFieldExpr::constant(const Eigen::VectorXd& v) {
  VectorFieldExpr out;
  const int d = static_cast<int>(v.size());
  for (int i = 0; i < d; ++i) out.components.push_back(ScalarField::constant(d, v(i)));
  return out;
}

Eigen::VectorXd gradient(const ScalarField& f, const Eigen::VectorXd& p) {
  return to_eigen(gradient(f, as_span(p)));
}

Eigen::MatrixXd hessian(const ScalarField& f, const Eigen::VectorXd& p) {
  const auto d = static_cast<int>(p.size());
  Eigen::MatrixXd h(d, d);
  std::vector<D1> inner(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) inner[static_cast<std::size_t>(k)] = D1(p(k), k == i ? 1.0 : 0.0);
    // Row i of the Hessian is the gradient of d f / d x^i.
    std::vector<D1> g = gradient(f, std::span<const D1>(inner));
    for (int j = 0; j < d; ++j) h(j, i) = g[static_cast<std::size_t>(j)].d;
  }
  return h;
}

Eigen::MatrixXd jacobian(const VectorFieldExpr& x, const Eigen::VectorXd& p) {
  auto jac = jacobian_of([&](std::span<const D1> q) { return x.eval(q); }, as_span(p));
  Eigen::MatrixXd out(x.dim(), p.size());
  for (int i = 0; i < x.dim(); ++i)
    for (Eigen::Index j = 0; j < p.size(); ++j) out(i, j) = jac[static_cast<std::size_t>(i)][j];
  return out;
}

ScalarField partial(const ScalarField& f, int slot) {
  if (slot < 0 || slot >= f.dim()) throw DimensionError("partial: slot out of range");
  return ScalarField::from_function(f.dim(), "partial", [f, slot](auto x) {
    using T = typename decltype(x)::value_type;
    auto q = seed(x, slot);
    return f.eval(std::span<const Dual<T>>(q)).d;
  });
}

}  // namespace darboux
