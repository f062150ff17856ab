#pragma once

// Actions by contactomorphisms, their moment map J(x)(xi) = -eta(xi_M(x)),
// and reduction of invariant Hamiltonian systems at J = 0 for abelian
// actions by coordinate translations.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "darboux/chart.hpp"
#include "darboux/dynamics.hpp"
#include "darboux/field.hpp"
#include "darboux/integrator.hpp"
#include "darboux/submanifolds.hpp"

namespace darboux {

struct GroupAction {
  DarbouxChart chart;
  std::vector<VectorFieldExpr> generators;
  bool abelian = true;
  /// For adapted actions, generator a is d/dx^{adapted[a]} (pair index).
  std::vector<int> adapted;

  int size() const { return static_cast<int>(generators.size()); }
  bool is_adapted() const { return !adapted.empty() && adapted.size() == generators.size(); }

  /// Translations d/dx^i for the given pair indices.
  static GroupAction translations(const DarbouxChart& chart, const std::vector<int>& slots);
};

struct ActionValidation {
  double max_lie_eta = 0.0;     // max |L_xi eta|
  double max_commutator = 0.0;  // max |[xi_a, xi_b]|
  double max_adapted = 0.0;     // max |xi_a - d/dx^{adapted[a]}|
  std::size_t samples = 0;
  bool contactomorphisms = false;
  bool commuting = false;
  bool adapted = false;
};

ActionValidation validate_action(const GroupAction& action, const std::vector<Point>& samples, double tol = 1e-9);

/// J_a = -eta(xi_a) as a field.
ScalarField moment_component(const GroupAction& action, int a);
Eigen::VectorXd moment_map(const GroupAction& action, const Point& p);

/// |dJ_a(p) - iota_{xi_a} d eta(p)|.
double moment_condition_residual(const GroupAction& action, int a, const Point& p);

/// |X_{J_a}(p) - xi_a(p)|.
double generator_hamiltonian_defect(const GroupAction& action, int a, const Point& p);

struct MomentLevelSet {
  LevelSetSubmanifold submanifold;
  std::vector<Point> points;  // the accepted samples
  std::size_t samples = 0;
  std::size_t rejected = 0;
  bool regular = false;
};

/// {J = mu} with regularity judged on Newton-projected random draws.
MomentLevelSet level_set(const GroupAction& action, const Eigen::VectorXd& mu, std::uint64_t seed = 0,
                         std::size_t count = 100);

struct OrbitReport {
  double kernel_distance = 0.0;      // ker dJ vs perp_{d eta} span{xi_a}
  double complement_distance = 0.0;  // perp_Lambda T(J^-1(mu)) vs span{xi_a}
  Eigen::MatrixXd complement;
  Eigen::MatrixXd orbit;
  bool at_zero = false;
  bool passed = false;  // kernel identity, plus the complement identity at mu = 0
};

OrbitReport verify_orbit_orthogonality(const GroupAction& action, const Eigen::VectorXd& mu, const Point& p,
                                       double tol = 1e-9);

struct ReducedSystem {
  ContactSystem system;
  QuotientProjection projection;
  std::vector<int> kept;      // ambient slots in reduced order
  double invariance = 0.0;    // max |xi_a(H)| on samples
  double substitution = 0.0;  // max |H(p) - H_mu(pi(p))| on samples
  ReductionReport pullback;
};

/// Reduction at mu = 0. Throws ReductionError when mu != 0, the action is
/// not abelian or not adapted, or H is not invariant.
ReducedSystem reduce(const ContactSystem& system, const GroupAction& action, const Eigen::VectorXd& mu,
                     std::uint64_t seed = 0, double tol = 1e-9);

struct ProjectedDynamicsReport {
  Trajectory full;
  Trajectory reduced;
  std::vector<double> mismatch;  // |pi(x(t)) - x~(t)| per step
  double max_mismatch = 0.0;
  double max_drift = 0.0;        // max |J(x(t))|
  double initial_offset = 0.0;   // |J(x0)|
  bool off_level = false;
};

/// Integrates the full and the reduced flows concurrently on the same rk4
/// grid and compares them.
ProjectedDynamicsReport verify_projected_dynamics(const ContactSystem& system, const GroupAction& action,
                                                  const ReducedSystem& reduced, const Point& x0,
                                                  const IntegratorSpec& spec, double tol = 1e-9);

enum class Quadrature { Trapezoid, Simpson };

/// Cumulative integral of samples f(t_i); Simpson uses the quadratic through
/// three neighbouring nodes and handles uneven spacing.
std::vector<double> cumulative_integral(const std::vector<double>& t, const std::vector<double>& f, Quadrature q);

/// Lifts a reduced trajectory back to J^-1(0) by abelian quadrature.
Trajectory reconstruct(const ContactSystem& system, const GroupAction& action, const ReducedSystem& reduced,
                       const Trajectory& reduced_traj, const Point& x0, Quadrature q = Quadrature::Simpson,
                       double tol = 1e-9);

/// max_t |J(x(t)) - J(x(0))|.
double moment_drift(const GroupAction& action, const Trajectory& traj);

}  // namespace darboux
