#include "darboux/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "darboux/calculus.hpp"
#include "darboux/linalg.hpp"

namespace darboux {

GroupAction GroupAction::translations(const DarbouxChart& chart, const std::vector<int>& slots) {
  GroupAction action{chart, {}, true, slots};
  for (int s : slots) {
    if (s < 0 || s >= chart.n()) throw DimensionError("translation slot out of range");
    action.generators.push_back(VectorFieldExpr::constant(Eigen::VectorXd::Unit(chart.dim(), chart.x(s))));
  }
  return action;
}

namespace {

void check_index(const GroupAction& action, int a) {
  if (a < 0 || a >= action.size()) throw DimensionError("generator index out of range");
}

Eigen::MatrixXd orbit_matrix(const GroupAction& action, const Point& p) {
  Eigen::MatrixXd m(action.chart.dim(), action.size());
  for (int a = 0; a < action.size(); ++a) m.col(a) = action.generators[static_cast<std::size_t>(a)](p);
  return m;
}

}  // namespace

ActionValidation validate_action(const GroupAction& action, const std::vector<Point>& samples, double tol) {
  const DarbouxChart& chart = action.chart;
  ActionValidation out;
  for (const auto& p : samples) {
    chart.validate(p);
    for (int a = 0; a < action.size(); ++a) {
      const auto& xi = action.generators[static_cast<std::size_t>(a)];
      out.max_lie_eta = std::max(out.max_lie_eta, lie_derivative_form(chart, xi, p).components.norm());
      if (action.is_adapted()) {
        Eigen::VectorXd e = Eigen::VectorXd::Unit(chart.dim(), chart.x(action.adapted[static_cast<std::size_t>(a)]));
        out.max_adapted = std::max(out.max_adapted, (xi(p) - e).norm());
      }
      for (int b = a + 1; b < action.size(); ++b)
        out.max_commutator = std::max(
            out.max_commutator, lie_bracket(xi, action.generators[static_cast<std::size_t>(b)], p).norm());
    }
    ++out.samples;
  }
  out.contactomorphisms = out.max_lie_eta <= tol;
  out.commuting = out.max_commutator <= tol;
  out.adapted = action.is_adapted() && out.max_adapted <= tol;
  return out;
}

ScalarField moment_component(const GroupAction& action, int a) {
  check_index(action, a);
  return -eta_of(action.chart, action.generators[static_cast<std::size_t>(a)]);
}

Eigen::VectorXd moment_map(const GroupAction& action, const Point& p) {
  action.chart.validate(p);
  Eigen::VectorXd eta = action.chart.eta_at(p).components;
  Eigen::VectorXd j(action.size());
  for (int a = 0; a < action.size(); ++a) j(a) = -eta.dot(action.generators[static_cast<std::size_t>(a)](p));
  return j;
}

double moment_condition_residual(const GroupAction& action, int a, const Point& p) {
  check_index(action, a);
  action.chart.validate(p);
  Eigen::VectorXd dj = gradient(moment_component(action, a), p);
  Eigen::VectorXd xi = action.generators[static_cast<std::size_t>(a)](p);
  return (dj - action.chart.deta_matrix().transpose() * xi).norm();
}

double generator_hamiltonian_defect(const GroupAction& action, int a, const Point& p) {
  check_index(action, a);
  ContactSystem s(action.chart, moment_component(action, a));
  return (hamiltonian_vector(s, p) - action.generators[static_cast<std::size_t>(a)](p)).norm();
}

MomentLevelSet level_set(const GroupAction& action, const Eigen::VectorXd& mu, std::uint64_t seed,
                         std::size_t count) {
  if (mu.size() != action.size()) throw DimensionError("moment value has the wrong number of components");
  if (action.size() == 0) throw DimensionError("level set of an empty action");
  std::vector<ScalarField> constraints;
  for (int a = 0; a < action.size(); ++a) constraints.push_back(moment_component(action, a) - mu(a));
  MomentLevelSet out{LevelSetSubmanifold(action.chart, constraints), {}};
  std::mt19937_64 rng(seed);
  SampleSet s = out.submanifold.sample(rng, count);
  out.samples = s.points.size();
  out.rejected = s.rejected;
  out.points = std::move(s.points);
  out.regular = out.samples == count && std::all_of(out.points.begin(), out.points.end(), [&](const Point& p) {
                  return out.submanifold.is_regular(p);
                });
  return out;
}

OrbitReport verify_orbit_orthogonality(const GroupAction& action, const Eigen::VectorXd& mu, const Point& p,
                                       double tol) {
  const DarbouxChart& chart = action.chart;
  if (mu.size() != action.size()) throw DimensionError("moment value has the wrong number of components");
  std::vector<ScalarField> constraints;
  for (int a = 0; a < action.size(); ++a) constraints.push_back(moment_component(action, a) - mu(a));
  LevelSetSubmanifold n(chart, constraints);
  auto q = n.project(p);
  if (!q) throw Error("point could not be projected onto the moment level set");
  Eigen::MatrixXd dj = n.constraint_jacobian(*q);
  if (linalg::rank(dj) != action.size()) throw RankError("moment value is not regular at this point");

  OrbitReport out;
  out.at_zero = mu.lpNorm<Eigen::Infinity>() == 0.0;
  Eigen::MatrixXd xi = orbit_matrix(action, *q);
  out.orbit = linalg::orthonormal_basis(xi);
  Eigen::MatrixXd ker_dj = linalg::nullspace(dj);
  Eigen::MatrixXd deta_perp = linalg::nullspace(xi.transpose() * chart.deta_matrix());
  out.kernel_distance = linalg::subspace_distance(ker_dj, deta_perp);
  out.complement = contact_complement(chart, *q, n.tangent_basis(*q));
  out.complement_distance = linalg::subspace_distance(out.complement, out.orbit);
  out.passed = out.kernel_distance <= tol && (!out.at_zero || out.complement_distance <= tol);
  return out;
}

ReducedSystem reduce(const ContactSystem& system, const GroupAction& action, const Eigen::VectorXd& mu,
                     std::uint64_t seed, double tol) {
  const DarbouxChart& chart = system.chart;
  if (!(action.chart == chart)) throw DimensionError("action and system live on different charts");
  if (mu.size() != action.size()) throw DimensionError("moment value has the wrong number of components");
  if (action.size() == 0) {
    std::vector<int> all(static_cast<std::size_t>(chart.dim()));
    for (int i = 0; i < chart.dim(); ++i) all[static_cast<std::size_t>(i)] = i;
    return {system, QuotientProjection::coordinate(chart, chart, all), all, 0.0, 0.0, {}};
  }
  if (mu.lpNorm<Eigen::Infinity>() != 0.0)
    throw ReductionError(ReductionError::Kind::NonzeroMoment,
                         "reduction is implemented at mu = 0 only: for mu != 0 the orbits are not horizontal "
                         "and the characteristic distribution of J^-1(mu) differs from the orbit directions",
                         mu.lpNorm<Eigen::Infinity>());
  if (!action.abelian) throw ReductionError(ReductionError::Kind::NotAbelian, "reduction needs an abelian action");
  if (!action.is_adapted())
    throw ReductionError(ReductionError::Kind::NotAdapted, "reduction needs generators declared as translations");
  std::vector<int> dropped = action.adapted;
  std::sort(dropped.begin(), dropped.end());
  if (std::adjacent_find(dropped.begin(), dropped.end()) != dropped.end())
    throw ReductionError(ReductionError::Kind::NotAdapted, "two generators translate the same coordinate");
  const int n_red = chart.n() - action.size();
  if (n_red < 1)
    throw ReductionError(ReductionError::Kind::NotAdapted, "reduction would leave no canonical coordinate pair");

  MomentLevelSet level = level_set(action, mu, seed);
  const std::vector<Point>& samples = level.points;

  ActionValidation v = validate_action(action, samples, tol);
  if (!v.adapted)
    throw ReductionError(ReductionError::Kind::NotAdapted, "generators are not the declared coordinate translations",
                         v.max_adapted);

  double invariance = 0.0;
  for (const auto& p : samples) {
    Eigen::VectorXd dh = gradient(system.hamiltonian, p);
    for (int s : action.adapted) invariance = std::max(invariance, std::abs(dh(chart.x(s))));
  }
  if (invariance > tol)
    throw ReductionError(ReductionError::Kind::NotInvariant,
                         "Hamiltonian is not invariant under the action: max |xi(H)| = " + std::to_string(invariance),
                         invariance);

  DarbouxChart red(n_red);
  std::vector<int> kept;
  auto is_dropped = [&](int i) { return std::binary_search(dropped.begin(), dropped.end(), i); };
  for (int i = 0; i < chart.n(); ++i)
    if (!is_dropped(i)) kept.push_back(chart.x(i));
  for (int i = 0; i < chart.n(); ++i)
    if (!is_dropped(i)) kept.push_back(chart.y(i));
  kept.push_back(chart.z());

  std::vector<ScalarField> args(static_cast<std::size_t>(chart.dim()), ScalarField::constant(red.dim(), 0.0));
  for (std::size_t j = 0; j < kept.size(); ++j)
    args[static_cast<std::size_t>(kept[j])] = ScalarField::coordinate(red.dim(), static_cast<int>(j));
  ScalarField h_mu = system.hamiltonian.compose(args);

  QuotientProjection pi = QuotientProjection::coordinate(chart, red, kept);
  double substitution = 0.0;
  for (const auto& p : samples)
    substitution = std::max(substitution, std::abs(system.hamiltonian(p) - h_mu(pi(p))));
  if (substitution > tol)
    throw ReductionError(ReductionError::Kind::NotInvariant, "reduced Hamiltonian disagrees on the level set",
                         substitution);

  ReductionReport pullback = verify_coisotropic_reduction(level.submanifold, pi, samples, tol);
  return {ContactSystem(red, h_mu), pi, kept, invariance, substitution, pullback};
}

ProjectedDynamicsReport verify_projected_dynamics(const ContactSystem& system, const GroupAction& action,
                                                  const ReducedSystem& reduced, const Point& x0,
                                                  const IntegratorSpec& spec, double tol) {
  if (spec.method != Method::Rk4)
    throw Error("projected dynamics are compared on a shared fixed grid; use rk4");
  system.chart.validate(x0);
  ProjectedDynamicsReport out;
  out.initial_offset = action.size() ? moment_map(action, x0).lpNorm<Eigen::Infinity>() : 0.0;
  out.off_level = out.initial_offset > tol;

  const Point x0_red = reduced.projection(x0);
  auto full = std::async(std::launch::async, [&] { return integrate(system, x0, spec); });
  auto red = std::async(std::launch::async, [&] { return integrate(reduced.system, x0_red, spec); });
  out.full = full.get();
  out.reduced = red.get();
  if (out.full.size() != out.reduced.size()) throw Error("full and reduced grids differ");

  for (std::size_t k = 0; k < out.full.size(); ++k) {
    const double m = (reduced.projection(out.full.points[k]) - out.reduced.points[k]).norm();
    out.mismatch.push_back(m);
    out.max_mismatch = std::max(out.max_mismatch, m);
    if (action.size())
      out.max_drift = std::max(out.max_drift, moment_map(action, out.full.points[k]).lpNorm<Eigen::Infinity>());
  }
  return out;
}

namespace {

// Integral over [lo, hi] of the quadratic through (t0,f0), (t1,f1), (t2,f2),
// written in Newton form about t1.
double quadratic_integral(const double* t, const double* f, double lo, double hi) {
  const double d01 = (f[1] - f[0]) / (t[1] - t[0]);
  const double d12 = (f[2] - f[1]) / (t[2] - t[1]);
  const double d012 = (d12 - d01) / (t[2] - t[0]);
  // q(t) = f1 + d01 (t - t1) + d012 (t - t1)(t - t0); s = t - t1, c = t1 - t0.
  const double c = t[1] - t[0];
  auto prim = [&](double s) { return f[1] * s + d01 * s * s / 2.0 + d012 * (s * s * s / 3.0 + c * s * s / 2.0); };
  return prim(hi - t[1]) - prim(lo - t[1]);
}

}  // namespace

std::vector<double> cumulative_integral(const std::vector<double>& t, const std::vector<double>& f, Quadrature q) {
  if (t.size() != f.size()) throw DimensionError("quadrature: node and value counts differ");
  std::vector<double> out(t.size(), 0.0);
  if (t.size() < 2) return out;
  if (q == Quadrature::Trapezoid || t.size() < 3) {
    for (std::size_t i = 1; i < t.size(); ++i) out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
    return out;
  }
  out[1] = quadratic_integral(&t[0], &f[0], t[0], t[1]);
  for (std::size_t i = 2; i < t.size(); ++i) {
    if (i % 2 == 0)
      out[i] = out[i - 2] + quadratic_integral(&t[i - 2], &f[i - 2], t[i - 2], t[i]);
    else
      out[i] = out[i - 1] + quadratic_integral(&t[i - 2], &f[i - 2], t[i - 1], t[i]);
  }
  return out;
}

Trajectory reconstruct(const ContactSystem& system, const GroupAction& action, const ReducedSystem& reduced,
                       const Trajectory& reduced_traj, const Point& x0, Quadrature q, double tol) {
  const DarbouxChart& chart = system.chart;
  chart.validate(x0);
  if (!action.abelian)
    throw ReductionError(ReductionError::Kind::NotAbelian, "reconstruction by quadrature needs an abelian action");
  if (action.size() > 0 && !action.is_adapted())
    throw ReductionError(ReductionError::Kind::NotAdapted, "reconstruction needs generators declared as translations");
  if (reduced_traj.size() == 0) throw Error("empty reduced trajectory");
  const double start_gap = (reduced.projection(x0) - reduced_traj.points.front()).norm();
  if (start_gap > tol)
    throw ReductionError(ReductionError::Kind::StartMismatch, "reduced trajectory does not start at pi(x0)",
                         start_gap);
  const double offset = action.size() ? moment_map(action, x0).lpNorm<Eigen::Infinity>() : 0.0;
  if (offset > tol)
    throw ReductionError(ReductionError::Kind::StartMismatch, "x0 is not on J^-1(0)", offset);

  // d(t): reduced state, y_a = 0, group coordinates frozen at x0.
  std::vector<Point> curve;
  for (const auto& xr : reduced_traj.points) {
    Point d = x0;
    for (int s : action.adapted) d(chart.y(s)) = 0.0;
    for (std::size_t j = 0; j < reduced.kept.size(); ++j) d(reduced.kept[j]) = xr(static_cast<Eigen::Index>(j));
    curve.push_back(std::move(d));
  }
  for (int s : action.adapted) {
    std::vector<double> xi;
    xi.reserve(curve.size());
    for (const auto& d : curve) xi.push_back(hamiltonian_vector(system, d)(chart.x(s)));
    std::vector<double> integral = cumulative_integral(reduced_traj.times, xi, q);
    for (std::size_t k = 0; k < curve.size(); ++k) curve[k](chart.x(s)) = x0(chart.x(s)) + integral[k];
  }

  Trajectory out;
  out.times = reduced_traj.times;
  for (auto& p : curve) {
    out.monitors.push_back(compute_monitors(system, p, system.hamiltonian(p)));
    out.points.push_back(std::move(p));
  }
  return out;
}

double moment_drift(const GroupAction& action, const Trajectory& traj) {
  if (traj.size() == 0 || action.size() == 0) return 0.0;
  const Eigen::VectorXd j0 = moment_map(action, traj.points.front());
  double worst = 0.0;
  for (const auto& p : traj.points) worst = std::max(worst, (moment_map(action, p) - j0).lpNorm<Eigen::Infinity>());
  return worst;
}

}  // namespace darboux
