#include "darboux/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace darboux {

std::string to_string(Method m) { return m == Method::Rk4 ? "rk4" : "rkf45"; }

Method method_from_string(const std::string& s) {
  if (s == "rk4") return Method::Rk4;
  if (s == "rkf45") return Method::Rkf45;
  throw Error("unknown integration method '" + s + "' (expected rk4 or rkf45)");
}

void IntegratorSpec::validate() const {
  if (!std::isfinite(t0) || !std::isfinite(t1)) throw Error("time span must be finite");
  if (!(t1 > t0)) throw Error("time span must satisfy t1 > t0");
  if (!(step > 0.0) || !std::isfinite(step)) throw Error("step must be positive");
  if (method == Method::Rkf45 && (!(abs_tol > 0.0) || !(rel_tol >= 0.0)))
    throw Error("rkf45 needs abs_tol > 0 and rel_tol >= 0");
  if (max_steps == 0) throw Error("max_steps must be positive");
}

namespace {

void check_finite(const Eigen::VectorXd& y, const Eigen::VectorXd& last, double last_t) {
  if (!y.allFinite())
    throw IntegrationError(IntegrationError::Kind::NonFinite,
                           "state became non-finite after t = " + std::to_string(last_t), last_t, last);
}

Eigen::VectorXd rk4_step(const OdeRhs& f, double t, const Eigen::VectorXd& y, double h) {
  Eigen::VectorXd k1 = f(t, y);
  Eigen::VectorXd k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
  Eigen::VectorXd k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
  Eigen::VectorXd k4 = f(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Runge-Kutta-Fehlberg 4(5); the fifth-order solution is propagated.
struct Rkf45Result {
  Eigen::VectorXd y5;
  Eigen::VectorXd err;
};

Rkf45Result rkf45_step(const OdeRhs& f, double t, const Eigen::VectorXd& y, double h) {
  Eigen::VectorXd k1 = f(t, y);
  Eigen::VectorXd k2 = f(t + h / 4.0, y + h * (k1 / 4.0));
  Eigen::VectorXd k3 = f(t + 3.0 * h / 8.0, y + h * (3.0 / 32.0 * k1 + 9.0 / 32.0 * k2));
  Eigen::VectorXd k4 =
      f(t + 12.0 * h / 13.0, y + h * (1932.0 / 2197.0 * k1 - 7200.0 / 2197.0 * k2 + 7296.0 / 2197.0 * k3));
  Eigen::VectorXd k5 =
      f(t + h, y + h * (439.0 / 216.0 * k1 - 8.0 * k2 + 3680.0 / 513.0 * k3 - 845.0 / 4104.0 * k4));
  Eigen::VectorXd k6 = f(t + h / 2.0, y + h * (-8.0 / 27.0 * k1 + 2.0 * k2 - 3544.0 / 2565.0 * k3 +
                                                1859.0 / 4104.0 * k4 - 11.0 / 40.0 * k5));
  Eigen::VectorXd y4 = y + h * (25.0 / 216.0 * k1 + 1408.0 / 2565.0 * k3 + 2197.0 / 4104.0 * k4 - k5 / 5.0);
  Eigen::VectorXd y5 = y + h * (16.0 / 135.0 * k1 + 6656.0 / 12825.0 * k3 + 28561.0 / 56430.0 * k4 -
                                9.0 / 50.0 * k5 + 2.0 / 55.0 * k6);
  return {y5, y5 - y4};
}

void integrate_rk4(const OdeRhs& f, const Eigen::VectorXd& y0, const IntegratorSpec& spec,
                   const StepObserver& observe) {
  const double span = spec.t1 - spec.t0;
  auto steps = static_cast<std::size_t>(std::ceil(span / spec.step - 1e-9));
  steps = std::max<std::size_t>(steps, 1);
  if (steps > spec.max_steps)
    throw IntegrationError(IntegrationError::Kind::TooManySteps, "rk4 would need more than max_steps steps",
                           spec.t0, y0);
  Eigen::VectorXd y = y0;
  double t = spec.t0;
  observe(t, y);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_next = k == steps ? spec.t1 : spec.t0 + static_cast<double>(k) * spec.step;
    Eigen::VectorXd y_next = rk4_step(f, t, y, t_next - t);
    check_finite(y_next, y, t);
    y = std::move(y_next);
    t = t_next;
    observe(t, y);
  }
}

void integrate_rkf45(const OdeRhs& f, const Eigen::VectorXd& y0, const IntegratorSpec& spec,
                     const StepObserver& observe) {
  Eigen::VectorXd y = y0;
  double t = spec.t0;
  double h = std::min(spec.step, spec.t1 - spec.t0);
  observe(t, y);
  std::size_t attempts = 0;
  while (t < spec.t1) {
    if (++attempts > spec.max_steps)
      throw IntegrationError(IntegrationError::Kind::TooManySteps, "rkf45 exceeded max_steps", t, y);
    const bool last = t + h >= spec.t1;
    if (last) h = spec.t1 - t;
    const double min_h = 1e-14 * std::max(1.0, std::abs(t));
    if (h < min_h)
      throw IntegrationError(IntegrationError::Kind::StepUnderflow,
                             "step size underflow at t = " + std::to_string(t), t, y);
    Rkf45Result r = rkf45_step(f, t, y, h);
    if (!r.y5.allFinite()) {
      h *= 0.25;
      continue;
    }
    double err = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double scale = spec.abs_tol + spec.rel_tol * std::max(std::abs(y(i)), std::abs(r.y5(i)));
      err = std::max(err, std::abs(r.err(i)) / scale);
    }
    if (err <= 1.0) {
      t = last ? spec.t1 : t + h;
      y = std::move(r.y5);
      observe(t, y);
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
  }
}

}  // namespace

void integrate_ode(const OdeRhs& f, const Eigen::VectorXd& y0, const IntegratorSpec& spec,
                   const StepObserver& observe) {
  spec.validate();
  if (!y0.allFinite()) throw DomainError("initial state is not finite");
  if (spec.method == Method::Rk4)
    integrate_rk4(f, y0, spec, observe);
  else
    integrate_rkf45(f, y0, spec, observe);
}

Monitors compute_monitors(const ContactSystem& system, const Point& p, double m) {
  const DarbouxChart& chart = system.chart;
  const ScalarField& h = system.hamiltonian;
  const int n = chart.n();
  Monitors out;
  Eigen::VectorXd dh = gradient(h, p);
  Eigen::VectorXd x = hamiltonian_vector(system, p);
  auto jac = jacobian_of<double>([&](std::span<const D1> q) { return hamiltonian_vector_at(chart, h, q); }, as_span(p));
  out.hamiltonian = h(p);
  out.reeb_h = dh(chart.z());

  // L_X eta = iota_X d eta + d(eta(X)), eta(X) = X^z - y_i X^{x^i}.
  Eigen::VectorXd lie = chart.deta_matrix().transpose() * x;
  double trace = 0.0;
  for (int j = 0; j < chart.dim(); ++j) {
    double d_eta_x = jac[chart.z()][j];
    for (int i = 0; i < n; ++i) d_eta_x -= p(chart.y(i)) * jac[chart.x(i)][j];
    lie(j) += d_eta_x;
    trace += jac[j][j];
  }
  for (int i = 0; i < n; ++i) lie(chart.y(i)) -= x(chart.x(i));
  out.conformal_residual = (lie + out.reeb_h * chart.eta_at(p).components).norm();
  out.energy_defect = std::abs(dh.dot(x) + out.reeb_h * out.hamiltonian);
  out.divergence_defect = std::abs(trace + (n + 1) * out.reeb_h);
  out.monitor_defect = std::abs(out.hamiltonian - m);
  return out;
}

Trajectory integrate(const ContactSystem& system, const Point& x0, const IntegratorSpec& spec) {
  system.chart.validate(x0);
  const int d = system.chart.dim();
  Eigen::VectorXd y0(d + 1);
  y0.head(d) = x0;
  y0(d) = system.hamiltonian(x0);
  OdeRhs rhs = [&system, d](double, const Eigen::VectorXd& y) {
    Eigen::VectorXd p = y.head(d);
    Eigen::VectorXd out(d + 1);
    out.head(d) = to_eigen(hamiltonian_vector_at(system.chart, system.hamiltonian, as_span(p)));
    auto q = seed(as_span(p), system.chart.z());
    out(d) = -system.hamiltonian.eval(std::span<const D1>(q)).d * y(d);
    return out;
  };
  Trajectory traj;
  integrate_ode(rhs, y0, spec, [&](double t, const Eigen::VectorXd& y) {
    traj.times.push_back(t);
    traj.points.emplace_back(y.head(d));
    traj.monitors.push_back(compute_monitors(system, y.head(d), y(d)));
  });
  return traj;
}

}  // namespace darboux
