#pragma once

// Lie brackets of vector fields and the Lie derivative of the contact form.

#include <Eigen/Dense>

#include "darboux/chart.hpp"
#include "darboux/field.hpp"

namespace darboux {

/// [X, Y](p) = J_Y(p) X(p) - J_X(p) Y(p), at a point of any arithmetic type.
template <class T>
std::vector<T> lie_bracket_at(const VectorFieldExpr& x, const VectorFieldExpr& y, std::span<const T> p) {
  auto eval_x = [&](std::span<const Dual<T>> q) { return x.eval(q); };
  auto eval_y = [&](std::span<const Dual<T>> q) { return y.eval(q); };
  auto jx = jacobian_of<T>(eval_x, p);
  auto jy = jacobian_of<T>(eval_y, p);
  std::vector<T> xv = x.eval(p);
  std::vector<T> yv = y.eval(p);
  const std::size_t d = p.size();
  std::vector<T> out(d, T(0.0));
  for (std::size_t i = 0; i < d; ++i) {
    T acc(0.0);
    for (std::size_t j = 0; j < d; ++j) acc = acc + jy[i][j] * xv[j] - jx[i][j] * yv[j];
    out[i] = acc;
  }
  return out;
}

Eigen::VectorXd lie_bracket(const VectorFieldExpr& x, const VectorFieldExpr& y, const Eigen::VectorXd& p);
TangentVec lie_bracket(const VectorFieldExpr& x, const VectorFieldExpr& y, const Point& p, const DarbouxChart& chart);

/// [X, Y] as a field (for nested brackets).
VectorFieldExpr lie_bracket_field(const VectorFieldExpr& x, const VectorFieldExpr& y);

/// eta(X) as a scalar expression: X^z - y_i X^{x^i}.
ScalarField eta_of(const DarbouxChart& chart, const VectorFieldExpr& x);

/// The Lie derivative of eta along X, via Cartan: iota_X d eta + d(eta(X)).
CotangentVec lie_derivative_form(const DarbouxChart& chart, const VectorFieldExpr& x, const Point& p);

}  // namespace darboux
