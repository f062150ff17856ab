#include "darboux/calculus.hpp"

namespace darboux {

namespace {

void check_dims(const VectorFieldExpr& x, int d, const char* what) {
  if (x.dim() != d) throw DimensionError(std::string(what) + ": vector field has wrong number of components");
  for (const auto& c : x.components)
    if (c.dim() != d) throw DimensionError(std::string(what) + ": component defined on wrong dimension");
}

}  // namespace

Eigen::VectorXd lie_bracket(const VectorFieldExpr& x, const VectorFieldExpr& y, const Eigen::VectorXd& p) {
  const int d = static_cast<int>(p.size());
  check_dims(x, d, "lie_bracket");
  check_dims(y, d, "lie_bracket");
  return to_eigen(lie_bracket_at(x, y, as_span(p)));
}

TangentVec lie_bracket(const VectorFieldExpr& x, const VectorFieldExpr& y, const Point& p, const DarbouxChart& chart) {
  chart.validate(p);
  return {p, lie_bracket(x, y, Eigen::VectorXd(p))};
}

VectorFieldExpr lie_bracket_field(const VectorFieldExpr& x, const VectorFieldExpr& y) {
  check_dims(y, x.dim(), "lie_bracket_field");
  return VectorFieldExpr::from_function(x.dim(), "bracket", [x, y](auto p) { return lie_bracket_at(x, y, p); });
}

ScalarField eta_of(const DarbouxChart& chart, const VectorFieldExpr& x) {
  check_dims(x, chart.dim(), "eta_of");
  ScalarField out = x.components[static_cast<std::size_t>(chart.z())];
  for (int i = 0; i < chart.n(); ++i)
    out = out - ScalarField::coordinate(chart.dim(), chart.y(i)) * x.components[static_cast<std::size_t>(chart.x(i))];
  return out;
}

CotangentVec lie_derivative_form(const DarbouxChart& chart, const VectorFieldExpr& x, const Point& p) {
  chart.validate(p);
  check_dims(x, chart.dim(), "lie_derivative_form");
  Eigen::VectorXd xv = x(p);
  // (iota_X d eta)_j = sum_i X^i M_ij
  Eigen::VectorXd contraction = chart.deta_matrix().transpose() * xv;
  auto eta_x = [&](std::span<const D1> q) {
    std::vector<D1> eta = chart.eta_components(q);
    std::vector<D1> xq = x.eval(q);
    D1 acc(0.0);
    for (std::size_t i = 0; i < eta.size(); ++i) acc = acc + eta[i] * xq[i];
    return std::vector<D1>{acc};
  };
  auto jac = jacobian_of<double>(eta_x, as_span(p));
  Eigen::VectorXd d_eta_x = to_eigen(jac[0]);
  return {p, contraction + d_eta_x};
}

}  // namespace darboux
