#pragma once

// The extended manifold TM x R with coordinates (q, v, t), dim 4n+3, and
// the contact form eta_bar = eta^c + t eta^v.
//
// Extended covectors and vectors are flat (q | v | t) records. Lifts of
// one-forms alpha = alpha_a dq^a:
//   alpha^v = alpha_a dq^a
//   alpha^c = (d_b alpha_a) v^b dq^a + alpha_a dv^a

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "darboux/chart.hpp"
#include "darboux/field.hpp"

namespace darboux {

struct ExtendedPoint {
  Point base;
  Eigen::VectorXd fiber;
  double t = 0.0;

  /// (q | v | t).
  Eigen::VectorXd flatten() const;
  static ExtendedPoint unflatten(const DarbouxChart& chart, const Eigen::VectorXd& e);
};

int extended_dim(const DarbouxChart& chart);
void validate(const DarbouxChart& chart, const ExtendedPoint& ep);

/// alpha given as the components of a one-form field.
Eigen::VectorXd vertical_lift_form(const DarbouxChart& chart, const VectorFieldExpr& alpha, const ExtendedPoint& ep);
Eigen::VectorXd complete_lift_form(const DarbouxChart& chart, const VectorFieldExpr& alpha, const ExtendedPoint& ep);

/// X^v = (0 | X(q) | 0), X^c = (X(q) | (dX)(q) v | 0).
Eigen::VectorXd vertical_lift_vector(const DarbouxChart& chart, const VectorFieldExpr& x, const ExtendedPoint& ep);
Eigen::VectorXd complete_lift_vector(const DarbouxChart& chart, const VectorFieldExpr& x, const ExtendedPoint& ep);

/// eta_bar components at a flattened extended point of any arithmetic type.
template <class T>
std::vector<T> extended_form_components(const DarbouxChart& chart, std::span<const T> e) {
  const auto d = static_cast<std::size_t>(chart.dim());
  std::span<const T> q = e.subspan(0, d);
  std::span<const T> v = e.subspan(d, d);
  const T& t = e[2 * d];
  std::vector<T> eta = chart.eta_components(q);
  auto jac = jacobian_of<T>([&](std::span<const Dual<T>> qq) { return chart.eta_components(qq); }, q);
  std::vector<T> out(2 * d + 1, T(0.0));
  for (std::size_t a = 0; a < d; ++a) {
    T acc = t * eta[a];
    for (std::size_t b = 0; b < d; ++b) acc = acc + jac[a][b] * v[b];
    out[a] = acc;
    out[d + a] = eta[a];
  }
  return out;
}

Eigen::VectorXd extended_contact_form(const DarbouxChart& chart, const ExtendedPoint& ep);

/// W_IJ = d_I A_J - d_J A_I for A = eta_bar, by forward-mode differentiation.
Eigen::MatrixXd extended_deta(const DarbouxChart& chart, const ExtendedPoint& ep);

/// flat_bar(u) = iota_u d eta_bar + eta_bar(u) eta_bar as a matrix.
Eigen::MatrixXd extended_flat_matrix(const DarbouxChart& chart, const ExtendedPoint& ep);

/// R_bar = R^v: the unit vector at the fiber-z slot.
Eigen::VectorXd extended_reeb(const DarbouxChart& chart);

struct ImageReport {
  double max_residual = 0.0;  // max |eta_bar(tangent column)|
  int image_dim = 0;          // rank of the image tangent space (minimum over samples)
  int legendrian_dim = 0;     // 2n + 1
  std::size_t samples = 0;

  bool legendrian(double tol) const { return samples > 0 && max_residual <= tol && image_dim == legendrian_dim; }
};

/// Image of p -> (p, X(p), s(p)).
ImageReport extended_image_residual(const DarbouxChart& chart, const VectorFieldExpr& x, const ScalarField& s,
                                    const std::vector<Point>& samples);

/// Image of p -> (p, X(p), -R(eta(X))(p)); Legendrian iff X is Hamiltonian.
ImageReport legendrian_image_residual(const DarbouxChart& chart, const VectorFieldExpr& x,
                                      const std::vector<Point>& samples);

}  // namespace darboux
