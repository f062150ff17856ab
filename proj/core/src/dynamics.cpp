#include "darboux/dynamics.hpp"

#include <cmath>

#include "darboux/calculus.hpp"

namespace darboux {

ContactSystem::ContactSystem(DarbouxChart c, ScalarField h) : chart(c), hamiltonian(std::move(h)) {
  if (!hamiltonian.valid()) throw Error("ContactSystem: empty Hamiltonian");
  if (hamiltonian.dim() != chart.dim())
    throw DimensionError("ContactSystem: Hamiltonian is defined on dimension " + std::to_string(hamiltonian.dim()) +
                         ", chart has " + std::to_string(chart.dim()));
}

VectorFieldExpr hamiltonian_field(const ContactSystem& system) {
  DarbouxChart chart = system.chart;
  ScalarField h = system.hamiltonian;
  return VectorFieldExpr::from_function(chart.dim(), "X_H",
                                        [chart, h](auto p) { return hamiltonian_vector_at(chart, h, p); });
}

Eigen::VectorXd hamiltonian_vector(const ContactSystem& system, const Point& p) {
  system.chart.validate(p);
  return to_eigen(hamiltonian_vector_at(system.chart, system.hamiltonian, as_span(p)));
}

double reeb_derivative(const ContactSystem& system, const Point& p) {
  system.chart.validate(p);
  auto q = seed(as_span(p), system.chart.z());
  return system.hamiltonian.eval(std::span<const D1>(q)).d;
}

double energy_rate_defect(const ContactSystem& system, const Point& p) {
  system.chart.validate(p);
  Eigen::VectorXd dh = gradient(system.hamiltonian, p);
  Eigen::VectorXd x = hamiltonian_vector(system, p);
  return std::abs(dh.dot(x) + dh(system.chart.z()) * system.hamiltonian(p));
}

double divergence(const ContactSystem& system, const Point& p) {
  system.chart.validate(p);
  const DarbouxChart& chart = system.chart;
  const ScalarField& h = system.hamiltonian;
  auto jac = jacobian_of<double>([&](std::span<const D1> q) { return hamiltonian_vector_at(chart, h, q); }, as_span(p));
  double trace = 0.0;
  for (std::size_t i = 0; i < jac.size(); ++i) trace += jac[i][i];
  return trace;
}

double divergence_defect(const ContactSystem& system, const Point& p) {
  return std::abs(divergence(system, p) + (system.chart.n() + 1) * reeb_derivative(system, p));
}

double invariant_measure_defect(const ContactSystem& system, const Point& p, double exponent) {
  if (std::isnan(exponent)) exponent = -(system.chart.n() + 1.0);
  const double h = system.hamiltonian(p);
  if (h == 0.0) throw DomainError("invariant measure H^-(n+1) Omega is undefined where H = 0");
  Eigen::VectorXd dh = gradient(system.hamiltonian, p);
  Eigen::VectorXd x = hamiltonian_vector(system, p);
  const double g = std::pow(h, exponent);
  const double g_prime = exponent * std::pow(h, exponent - 1.0);
  return std::abs(g_prime * dh.dot(x) + g * divergence(system, p));
}

ConformalFit conformal_factor(const DarbouxChart& chart, const VectorFieldExpr& x, const Point& p) {
  Eigen::VectorXd lie = lie_derivative_form(chart, x, p).components;
  Eigen::VectorXd eta = chart.eta_at(p).components;
  const double g = lie.dot(eta) / eta.squaredNorm();
  return {g, (lie - g * eta).norm()};
}

HamiltonianCheck is_hamiltonian(const DarbouxChart& chart, const VectorFieldExpr& x, const std::vector<Point>& samples) {
  HamiltonianCheck out;
  out.hamiltonian = -eta_of(chart, x);
  ContactSystem system(chart, out.hamiltonian);
  for (const auto& p : samples) {
    chart.validate(p);
    out.max_defect = std::max(out.max_defect, (x(p) - hamiltonian_vector(system, p)).norm());
    ++out.samples;
  }
  return out;
}

}  // namespace darboux
