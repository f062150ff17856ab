#pragma once

// Explicit Runge-Kutta integration of contact Hamiltonian flows.
//
// The state is augmented with the scalar m(t) solving m' = -R(H) m,
// m(0) = H(x0). Along an exact flow m(t) = H(x(t)), so |H - m| is recorded
// as an independent conservation monitor.

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "darboux/dynamics.hpp"
#include "darboux/errors.hpp"

namespace darboux {

enum class Method { Rk4, Rkf45 };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct IntegratorSpec {
  Method method = Method::Rk4;
  double t0 = 0.0;
  double t1 = 1.0;
  double step = 1e-3;  // fixed step (rk4) or initial step (rkf45)
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  std::size_t max_steps = 10'000'000;

  /// Throws Error on a non-positive step, a reversed span or bad tolerances.
  void validate() const;
};

struct Monitors {
  double hamiltonian = 0.0;
  double reeb_h = 0.0;              // R(H)
  double conformal_residual = 0.0;  // |L_X eta + R(H) eta|
  double energy_defect = 0.0;       // |dH(X_H) + R(H) H|
  double divergence_defect = 0.0;   // |div X_H + (n+1) R(H)|
  double monitor_defect = 0.0;      // |H(x(t)) - m(t)|
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Point> points;
  std::vector<Monitors> monitors;

  std::size_t size() const { return times.size(); }
};

class IntegrationError : public Error {
 public:
  enum class Kind { NonFinite, StepUnderflow, TooManySteps };

  IntegrationError(Kind kind, const std::string& msg, double last_time, Point last_state)
      : Error(msg), kind_(kind), last_time_(last_time), last_state_(std::move(last_state)) {}

  Kind kind() const { return kind_; }
  double last_time() const { return last_time_; }
  const Point& last_state() const { return last_state_; }

 private:
  Kind kind_;
  double last_time_;
  Point last_state_;
};

using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
using StepObserver = std::function<void(double, const Eigen::VectorXd&)>;

/// Integrates y' = f(t, y) over [spec.t0, spec.t1]; `observe` sees the
/// initial state and every accepted step. Throws IntegrationError.
void integrate_ode(const OdeRhs& f, const Eigen::VectorXd& y0, const IntegratorSpec& spec,
                   const StepObserver& observe);

Monitors compute_monitors(const ContactSystem& system, const Point& p, double m);

/// Flow of X_H from x0 with per-step monitors.
Trajectory integrate(const ContactSystem& system, const Point& x0, const IntegratorSpec& spec = {});

}  // namespace darboux
