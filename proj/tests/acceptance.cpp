// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "darboux/calculus.hpp"
#include "darboux/darboux.hpp"
#include "darboux/lifts.hpp"
#include "darboux/symmetry.hpp"
#include "fields.hpp"

using namespace darboux;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<Point> draws(gen::Rng& rng, int dim, int count, double radius = 1.0) {
  std::vector<Point> out;
  for (int k = 0; k < count; ++k) out.push_back(gen::point(rng, dim, radius));
  return out;
}

IntegratorSpec rk4(double t1, double h) {
  IntegratorSpec s;
  s.t1 = t1;
  s.step = h;
  return s;
}

ContactSystem cylinder(double gamma) {
  DarbouxChart c(2);
  return {c, fx::scalar(c, "(y1^2 + y2^2)/2 + y1 + cos(x2) + $g*z", {{"g", gamma}})};
}

Outcome energy_law() {
  Outcome o;
  DarbouxChart c(1);
  ContactSystem s(c, fx::scalar(c, "(x1^2 + y1^2)/2 + 0.1*z"));
  const Point x0 = fx::vec({1, 0, 0});
  const auto start = std::chrono::steady_clock::now();
  Trajectory tr = integrate(s, x0, rk4(10.0, 1e-3));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double h0 = s.hamiltonian(x0);
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i)
    worst = std::max(worst, std::abs(s.hamiltonian(tr.points[i]) - h0 * std::exp(-0.1 * tr.times[i])));
  o.require(tr.size() == 10001, "expected 10001 nodes");
  o.require(worst <= 1e-6, "max |H - H0 e^{-0.1t}| = " + fmt(worst));
  o.require(seconds < 1.0, "runtime " + fmt(seconds) + " s");
  o.detail = o.pass ? "max error " + fmt(worst) + ", " + fmt(seconds) + " s" : o.detail;
  return o;
}

Outcome volume_law() {
  Outcome o;
  gen::Rng rng(102);
  double worst = 0.0;
  int points = 0;
  for (int n = 1; n <= 3; ++n) {
    DarbouxChart c(n);
    for (int k = 0; k < 10; ++k) {
      ContactSystem s(c, gen::polynomial(rng, c.dim(), 3, 4));
      for (const auto& p : draws(rng, c.dim(), 100)) {
        worst = std::max(worst, divergence_defect(s, p));
        ++points;
      }
    }
  }
  o.require(worst <= 1e-9, "max divergence defect " + fmt(worst));
  if (o.pass) o.detail = std::to_string(points) + " points, max defect " + fmt(worst);
  return o;
}

Outcome invariant_measure() {
  Outcome o;
  gen::Rng rng(103);
  double worst = 0.0;
  double weakest_control = INFINITY;
  for (int n = 1; n <= 2; ++n) {
    DarbouxChart c(n);
    ContactSystem s(c, fx::scalar(c, n == 1 ? "(x1^2 + y1^2)/2 + 0.1*z + 2" : "(x1^2 + y1^2 + x2*y2)/2 + 0.1*z + 2"));
    for (const auto& p : draws(rng, c.dim(), 100)) {
      o.require(std::abs(s.hamiltonian(p)) >= 1.0, "H not bounded away from 0");
      worst = std::max(worst, invariant_measure_defect(s, p));
      weakest_control = std::min(weakest_control, invariant_measure_defect(s, p, -(n + 1) + 0.5));
    }
  }
  o.require(worst <= 1e-9, "max defect " + fmt(worst));
  o.require(weakest_control > 1e-3, "perturbed exponent control only " + fmt(weakest_control));
  if (o.pass) o.detail = "max defect " + fmt(worst) + ", weakest control " + fmt(weakest_control);
  return o;
}

Outcome bracket_algebra() {
  Outcome o;
  gen::Rng rng(104);
  double antisym = 0.0, jacobi = 0.0, leibniz = 0.0, coord = 0.0, commutator = 0.0;
  int points = 0;
  for (int n = 1; n <= 2; ++n) {
    DarbouxChart c(n);
    JacobiStructure s = JacobiStructure::contact(c);
    const ScalarField x1 = ScalarField::coordinate(c.dim(), c.x(0));
    const ScalarField y1 = ScalarField::coordinate(c.dim(), c.y(0));
    for (int k = 0; k < 10; ++k) {
      ScalarField f = gen::transcendental(rng, c.dim());
      ScalarField g = gen::polynomial(rng, c.dim(), 2, 3);
      ScalarField h = gen::transcendental(rng, c.dim());
      VectorFieldExpr xf = hamiltonian_field(ContactSystem(c, f));
      VectorFieldExpr xg = hamiltonian_field(ContactSystem(c, g));
      ContactSystem fg(c, bracket_field(s, f, g));
      const ScalarField hz = partial(h, c.z());
      for (const auto& p : draws(rng, c.dim(), 10)) {
        antisym = std::max(antisym, std::abs(jacobi_bracket(s, f, g, p) + jacobi_bracket(s, g, f, p)));
        jacobi = std::max(jacobi, jacobi_identity_residual(s, f, g, h, p));
        leibniz = std::max(leibniz, std::abs(leibniz_defect(s, f, g, h, p) - f(p) * g(p) * hz(p)));
        coord = std::max(coord, std::abs(jacobi_bracket(s, x1, y1, p) + 1.0));
        commutator = std::max(commutator, (lie_bracket(xf, xg, p) - hamiltonian_vector(fg, p)).lpNorm<Eigen::Infinity>());
        ++points;
      }
    }
  }
  o.require(points >= 100, "too few points");
  o.require(antisym <= 1e-8, "antisymmetry " + fmt(antisym));
  o.require(jacobi <= 1e-8, "Jacobi identity " + fmt(jacobi));
  o.require(leibniz <= 1e-8, "Leibniz defect vs -fgE(h) " + fmt(leibniz));
  o.require(coord <= 1e-12, "{x,y} + 1 = " + fmt(coord));
  o.require(commutator <= 1e-8, "[X_f, X_g] - X_{f,g} = " + fmt(commutator));
  if (o.pass)
    o.detail = std::to_string(points) + " points; antisym " + fmt(antisym) + ", jacobi " + fmt(jacobi) + ", leibniz " +
               fmt(leibniz) + ", commutator " + fmt(commutator);
  return o;
}

Outcome legendrian_images() {
  Outcome o;
  gen::Rng rng(105);
  double ham_worst = 0.0;
  double other_best = INFINITY;
  for (int k = 0; k < 5; ++k) {
    DarbouxChart c(1 + k % 2);
    ScalarField h = gen::transcendental(rng, c.dim());
    VectorFieldExpr x = hamiltonian_field(ContactSystem(c, h));
    std::vector<Point> samples = draws(rng, c.dim(), 50);
    ImageReport good = legendrian_image_residual(c, x, samples);
    ham_worst = std::max(ham_worst, good.max_residual);
    o.require(good.legendrian(1e-8), "Hamiltonian field " + std::to_string(k) + " not Legendrian");

    // X_H plus f d/dy1: -eta is unchanged but the field is no longer X_{-eta}.
    VectorFieldExpr bent = x;
    bent.components[static_cast<std::size_t>(c.y(0))] =
        bent.components[static_cast<std::size_t>(c.y(0))] + gen::polynomial(rng, c.dim(), 1, 2) + 0.5;
    ImageReport bad = legendrian_image_residual(c, bent, samples);
    other_best = std::min(other_best, bad.max_residual);
    o.require(!bad.legendrian(1e-8), "non-Hamiltonian field " + std::to_string(k) + " accepted");
  }
  o.require(ham_worst <= 1e-8, "Hamiltonian residual " + fmt(ham_worst));
  o.require(other_best >= 1e-2, "non-Hamiltonian residual only " + fmt(other_best));
  if (o.pass) o.detail = "Hamiltonian max " + fmt(ham_worst) + ", non-Hamiltonian min " + fmt(other_best);
  return o;
}

Outcome submanifold_suite() {
  Outcome o;
  gen::Rng rng(106);
  DarbouxChart c2(2);
  auto level = [&](std::vector<std::string> phi) {
    std::vector<ScalarField> fs;
    for (const auto& s : phi) fs.push_back(fx::scalar(c2, s));
    return LevelSetSubmanifold(c2, fs);
  };
  std::vector<Point> starts = draws(rng, 5, 100, 2.0);
  o.require(is_coisotropic(level({"y1", "y2"}), starts).coisotropic, "{y1=0,y2=0} rejected");
  o.require(!is_coisotropic(level({"x1", "y1"}), starts).coisotropic, "{x1=0,y1=0} accepted");

  DarbouxChart c1(1);
  const VariableTable one = VariableTable::parameters(1);
  const ParameterMap c07{{"c", 0.7}};
  ParamSubmanifold curve(c1, 1, {parse_field("s1", one), parse_field("$c", one, c07), parse_field("$c*s1", one, c07)});
  std::vector<Eigen::VectorXd> params;
  for (int k = 0; k < 50; ++k) params.push_back(gen::point(rng, 1, 3.0));
  o.require(is_legendrian(curve, params).legendrian, "psi(s) = (s, c, cs) rejected");

  double equality = 0.0;
  int distributions = 0;
  bool dimensions = true;
  for (int n = 1; n <= 3; ++n) {
    DarbouxChart c(n);
    for (int trial = 0; trial < 60; ++trial) {
      Point p = gen::point(rng, c.dim(), 2.0);
      const int kind = trial % 3;
      const int k = rng.integer(1, kind == 1 ? 2 * n + 1 : 2 * n);
      Eigen::MatrixXd frame = c.frame(p).vectors().leftCols(2 * n);
      Eigen::MatrixXd basis(c.dim(), k);
      if (kind == 0) {
        basis = frame * gen::matrix(rng, 2 * n, k);
      } else if (kind == 1) {
        basis.leftCols(k - 1) = frame * gen::matrix(rng, 2 * n, k - 1);
        basis.col(k - 1) = c.reeb(p).components + basis.leftCols(k - 1) * gen::matrix(rng, k - 1, 1);
      } else {
        basis = gen::matrix(rng, c.dim(), k);
      }
      const PointClass cls = classify_point(c, p, basis);
      Eigen::MatrixXd lhs = contact_complement(c, p, basis);
      Eigen::MatrixXd rhs = deta_complement_horizontal(c, p, basis);
      const int law = cls == PointClass::Horizontal ? 2 * n - k : 2 * n + 1 - k;
      dimensions = dimensions && expected_complement_dim(c, p, basis) == law && lhs.cols() == law;
      if (kind == 2) {
        o.require(cls == PointClass::Oblique, "random distribution not oblique");
        o.require(rhs.cols() == lhs.cols() - 1, "oblique gap is not one-dimensional");
        for (Eigen::Index j = 0; j < rhs.cols(); ++j)
          o.require(linalg::distance_to_span(lhs, rhs.col(j)) <= 1e-10, "oblique inclusion fails");
      } else {
        o.require(cls == (kind == 0 ? PointClass::Horizontal : PointClass::Vertical), "classification");
        o.require(rhs.cols() == lhs.cols(), "complement dimensions differ");
        equality = std::max(equality, oracle::projector_distance(lhs, rhs));
        ++distributions;
      }
    }
  }
  o.require(equality <= 1e-8, "complement equality " + fmt(equality));
  o.require(dimensions, "dimension law");
  if (o.pass)
    o.detail = "complement equality " + fmt(equality) + " on " + std::to_string(distributions) +
               " horizontal/vertical distributions; oblique inclusion with 1-dim gap";
  return o;
}

Outcome reduction_pipeline() {
  Outcome o;
  ContactSystem s = cylinder(0.1);
  GroupAction shift = GroupAction::translations(s.chart, {0});
  ReducedSystem r = reduce(s, shift, Eigen::VectorXd::Zero(1));
  o.require(r.kept == std::vector<int>{1, 3, 4}, "reduced chart is not (x2, y2, z)");
  o.require(r.pullback.passed && r.pullback.pullback_residual <= 1e-9,
            "pullback residual " + fmt(r.pullback.pullback_residual));
  gen::Rng rng(107);
  double form = 0.0, ham = 0.0;
  for (const auto& q : draws(rng, 3, 50, 2.0)) {
    form = std::max(form, (r.system.chart.eta_at(q).components - fx::vec({-q(1), 0, 1})).norm());
    ham = std::max(ham, std::abs(r.system.hamiltonian(q) - (q(1) * q(1) / 2 + std::cos(q(0)) + 0.1 * q(2))));
  }
  o.require(form == 0.0, "reduced form is not dz - y2 dx2");
  o.require(ham <= 1e-12, "reduced Hamiltonian " + fmt(ham));

  const Point x0 = fx::vec({0.3, 0.5, 0.0, 0.2, 0.1});
  ProjectedDynamicsReport rep = verify_projected_dynamics(s, shift, r, x0, rk4(5.0, 1e-3));
  o.require(rep.max_mismatch <= 1e-6, "projected mismatch " + fmt(rep.max_mismatch));
  Trajectory lifted = reconstruct(s, shift, r, rep.reduced, x0);
  double recon = 0.0;
  for (std::size_t i = 0; i < lifted.size(); ++i)
    recon = std::max(recon, (lifted.points[i] - rep.full.points[i]).lpNorm<Eigen::Infinity>());
  o.require(lifted.size() == rep.full.size() && recon <= 1e-6, "reconstruction " + fmt(recon));

  DarbouxChart c1(1);
  LevelSetSubmanifold n(s.chart, {ScalarField::coordinate(5, s.chart.y(0))});
  QuotientProjection pi = QuotientProjection::coordinate(s.chart, c1, r.kept);
  std::vector<ScalarField> psi;
  for (const char* e : {"s1", "s2", "0", "0", "1.5"}) psi.push_back(parse_field(e, VariableTable::parameters(2)));
  ParamSubmanifold l(s.chart, 2, psi);
  std::vector<Eigen::VectorXd> params;
  for (int k = 0; k < 30; ++k) params.push_back(gen::point(rng, 2, 2.0));
  o.require(verify_legendrian_projection(l, n, pi, params).legendrian, "Legendrian projection");
  if (o.pass)
    o.detail = "pullback " + fmt(r.pullback.pullback_residual) + ", mismatch " + fmt(rep.max_mismatch) +
               ", reconstruction " + fmt(recon);
  return o;
}

Outcome noether() {
  Outcome o;
  GroupAction shift = GroupAction::translations(DarbouxChart(2), {0});
  const double on = moment_drift(shift, integrate(cylinder(0.1), fx::vec({0.3, 0.5, 0.0, 0.2, 0.1}), rk4(10.0, 1e-3)));
  const double off = moment_drift(shift, integrate(cylinder(0.0), fx::vec({0.3, 0.5, 0.1, 0.2, 0.1}), rk4(10.0, 1e-3)));
  o.require(on <= 1e-8, "damped, J = 0: drift " + fmt(on));
  o.require(off <= 1e-8, "conservative, J = 0.1: drift " + fmt(off));
  if (o.pass) o.detail = "drift " + fmt(on) + " (damped, J=0), " + fmt(off) + " (conservative, J=0.1)";
  return o;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[e.path().filename().string()] = s.str();
  }
  return out;
}

Outcome determinism() {
  Outcome o;
  std::random_device rd;
  const fs::path root = fs::temp_directory_path() / ("darboux_acceptance_" + std::to_string(rd()));
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"brackets", "brackets"},       {"frame", "frame"},
      {"submanifold", "coisotropic"}, {"submanifold", "not_coisotropic"},
      {"submanifold", "legendrian_curve"}, {"lift", "lift_hamiltonian"},
      {"lift", "lift_dy"}};
  int compared = 0;
  for (const auto& [what, name] : cases) {
    const std::string config = std::string(DARBOUX_CONFIG_DIR) + "/" + name + ".json";
    std::vector<std::map<std::string, std::string>> runs;
    for (const char* workers : {"1", "4"}) {
      const fs::path dir = root / (name + "_" + workers);
      std::vector<std::string> args = {"darboux", "check", what, "--config", config, "--out", dir.string(),
                                       "--seed", "2024", "--quiet", "--workers", workers};
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
      o.require(code == 0 || code == 1, name + " exited " + std::to_string(code));
      runs.push_back(snapshot(dir));
    }
    o.require(!runs[0].empty(), name + " wrote nothing");
    o.require(runs[0] == runs[1], name + " outputs differ");
    ++compared;
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  if (o.pass) o.detail = std::to_string(compared) + " check configs, identical JSON across runs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"energy dissipation law", energy_law},
      {"volume law", volume_law},
      {"invariant measure", invariant_measure},
      {"bracket algebra", bracket_algebra},
      {"Hamiltonian fields and Legendrian images", legendrian_images},
      {"submanifold suite", submanifold_suite},
      {"reduction pipeline", reduction_pipeline},
      {"Noether-type conservation", noether},
      {"determinism of check reports", determinism}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    if (!r.pass) ++failures;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, criteria[i].first.c_str(), r.pass ? "PASS" : "FAIL",
                r.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
