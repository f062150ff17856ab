#pragma once

// Contact Hamiltonian vector fields and the dissipation identities they obey:
//
//   X_H(H)          = -R(H) H
//   div X_H         = -(n+1) R(H)
//   L_{X_H} eta     = -R(H) eta
//   L_{X_H} (H^{-(n+1)} Omega) = 0
//
// The contact volume Omega = eta ^ (d eta)^n is a constant multiple of the
// coordinate volume in Darboux coordinates, so the coordinate divergence
// stands in for the Lie derivative of Omega (the constant cancels).

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "darboux/chart.hpp"
#include "darboux/field.hpp"

namespace darboux {

struct ContactSystem {
  DarbouxChart chart;
  ScalarField hamiltonian;

  ContactSystem(DarbouxChart c, ScalarField h);
};

/// X_H = H_{y_i} d/dx^i - (H_{x^i} + y_i H_z) d/dy_i + (y_i H_{y_i} - H) d/dz.
template <class T>
std::vector<T> hamiltonian_vector_at(const DarbouxChart& chart, const ScalarField& h, std::span<const T> p) {
  std::vector<T> g = gradient(h, p);
  const int n = chart.n();
  std::vector<T> out(static_cast<std::size_t>(chart.dim()), T(0.0));
  const T hz = g[chart.z()];
  T z_comp = -h.eval(p);
  for (int i = 0; i < n; ++i) {
    const T hy = g[chart.y(i)];
    out[chart.x(i)] = hy;
    out[chart.y(i)] = -(g[chart.x(i)] + p[chart.y(i)] * hz);
    z_comp = z_comp + p[chart.y(i)] * hy;
  }
  out[chart.z()] = z_comp;
  return out;
}

VectorFieldExpr hamiltonian_field(const ContactSystem& system);
Eigen::VectorXd hamiltonian_vector(const ContactSystem& system, const Point& p);

/// R(H) = dH/dz.
double reeb_derivative(const ContactSystem& system, const Point& p);

/// |dH(X_H) + R(H) H|.
double energy_rate_defect(const ContactSystem& system, const Point& p);

/// Coordinate divergence of X_H (trace of its Jacobian).
double divergence(const ContactSystem& system, const Point& p);

/// |div X_H + (n+1) R(H)|.
double divergence_defect(const ContactSystem& system, const Point& p);

/// |X_H(g(H)) + g(H) div X_H| with g(h) = h^exponent. The default exponent
/// -(n+1) gives the invariant measure; other exponents are negative
/// controls. Throws DomainError where H vanishes.
double invariant_measure_defect(const ContactSystem& system, const Point& p,
                                double exponent = std::numeric_limits<double>::quiet_NaN());

struct ConformalFit {
  double factor;    // least-squares g in L_X eta = g eta
  double residual;  // norm of L_X eta - g eta
};

ConformalFit conformal_factor(const DarbouxChart& chart, const VectorFieldExpr& x, const Point& p);

struct HamiltonianCheck {
  ScalarField hamiltonian;  // -eta(X)
  double max_defect = 0.0;  // max over samples of |X - X_{-eta(X)}|
  std::size_t samples = 0;

  bool passed(double tol) const { return max_defect <= tol; }
};

/// Recovers H = -eta(X) and measures how far X is from X_H on the samples.
HamiltonianCheck is_hamiltonian(const DarbouxChart& chart, const VectorFieldExpr& x, const std::vector<Point>& samples);

}  // namespace darboux
