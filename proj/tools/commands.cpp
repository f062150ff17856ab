#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "darboux/darboux.hpp"
#include "pool.hpp"

#ifndef DARBOUX_VERSION_STRING
#define DARBOUX_VERSION_STRING "0.0.0"
#endif

namespace darboux::cli {

using nlohmann::json;

const char* version() { return DARBOUX_VERSION_STRING; }

namespace {

constexpr double kIdentityTol = 1e-8;
constexpr double kFrameTol = 1e-10;
constexpr double kMismatchTol = 1e-6;

struct Context {
  ScenarioConfig cfg;
  DarbouxChart chart;
  std::uint64_t seed;
  std::string hash;
  Options opt;
};

Context load(const Options& opt) {
  ScenarioConfig cfg = load_config(opt.config);
  DarbouxChart chart(cfg.n);
  const std::uint64_t seed = opt.seed.value_or(cfg.seed);
  std::string hash = fnv1a_hex(cfg.canonical);
  return {std::move(cfg), chart, seed, std::move(hash), opt};
}

unsigned workers(const Context& ctx) {
  return ctx.opt.workers ? ctx.opt.workers : std::max(1u, std::thread::hardware_concurrency());
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json header(const Context& ctx, const std::string& command) {
  json j;
  j["tool"] = "darboux";
  j["version"] = version();
  j["config_hash"] = ctx.hash;
  j["command"] = command;
  j["seed"] = ctx.seed;
  j["n"] = ctx.cfg.n;
  return j;
}

class Outputs {
 public:
  explicit Outputs(const Context& ctx) : dir_(ctx.opt.out), prefix_(ctx.cfg.prefix) {}

  void add(const std::string& suffix, std::string content) { files_.emplace_back(suffix, std::move(content)); }
  void add_json(const std::string& suffix, const json& j) { add(suffix, j.dump(2) + "\n"); }

  std::vector<std::string> commit() const {
    std::filesystem::create_directories(dir_);
    std::vector<std::string> written;
    for (const auto& [suffix, content] : files_) {
      std::filesystem::path path = std::filesystem::path(dir_) / (prefix_ + "_" + suffix);
      std::ofstream f(path, std::ios::binary);
      f << content;
      if (!f) throw ConfigError("cannot write '" + path.string() + "'");
      written.push_back(path.string());
    }
    return written;
  }

 private:
  std::string dir_;
  std::string prefix_;
  std::vector<std::pair<std::string, std::string>> files_;
};

void announce(const Context& ctx, std::ostream& out, const std::string& summary, const std::vector<std::string>& files) {
  if (ctx.opt.quiet) return;
  out << summary << '\n';
  for (const auto& f : files) out << "  wrote " << f << '\n';
}

ContactSystem make_system(const Context& ctx) {
  if (ctx.cfg.hamiltonian.empty()) throw ConfigError("config: 'hamiltonian' is required for this command");
  return {ctx.chart, parse_field(ctx.cfg.hamiltonian, ctx.chart, ctx.cfg.parameters)};
}

VectorFieldExpr make_field(const DarbouxChart& chart, const std::vector<std::string>& src, const ParameterMap& params) {
  VectorFieldExpr out;
  for (const auto& s : src) out.components.push_back(parse_field(s, chart, params));
  return out;
}

std::vector<Point> draw_points(std::mt19937_64& rng, int dim, std::size_t count, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Point> out;
  for (std::size_t k = 0; k < count; ++k) {
    Point p(dim);
    for (int i = 0; i < dim; ++i) p(i) = u(rng);
    out.push_back(std::move(p));
  }
  return out;
}

std::string trajectory_csv(const DarbouxChart& chart, const Trajectory& tr) {
  std::ostringstream s;
  s << 't';
  for (const auto& name : chart.variable_names()) s << ',' << name;
  s << ",H,RH,energy_defect,div_defect\n";
  for (std::size_t k = 0; k < tr.size(); ++k) {
    s << num(tr.times[k]);
    for (Eigen::Index i = 0; i < tr.points[k].size(); ++i) s << ',' << num(tr.points[k](i));
    const Monitors& m = tr.monitors[k];
    s << ',' << num(m.hamiltonian) << ',' << num(m.reeb_h) << ',' << num(m.energy_defect) << ','
      << num(m.divergence_defect) << '\n';
  }
  return s.str();
}

json identity(double residual, double tol, std::size_t samples, bool below = true) {
  json j;
  j["residual"] = residual;
  j["tolerance"] = tol;
  j["samples"] = samples;
  j["passed"] = below ? residual <= tol : residual > tol;
  return j;
}

bool all_passed(const json& identities) {
  for (const auto& [name, v] : identities.items())
    if (!v["passed"].get<bool>()) return false;
  return true;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IntegrationError& e) {
    err << "numerical failure: " << e.what() << " (last finite state at t = " << num(e.last_time()) << ")\n";
    return kNumericalFailure;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "output error: " << e.what() << '\n';
    return kConfigError;
  }
}

// ---- check brackets -------------------------------------------------------

int check_brackets(const Context& ctx, std::ostream& out) {
  const DarbouxChart& c = ctx.chart;
  const bool contact = ctx.cfg.structure == "contact";
  JacobiStructure s = contact ? JacobiStructure::contact(c) : JacobiStructure::cosymplectic(c);
  std::vector<std::string> src = ctx.cfg.functions;
  if (src.empty()) src = {"x1^2*y1 + sin(z)", "exp(x1)*y1 - z^2", "x1*z + y1^3"};
  if (src.size() < 3) throw ConfigError("functions: need at least three functions for the bracket identities");
  std::vector<ScalarField> fs;
  for (const auto& f : src) fs.push_back(parse_field(f, c, ctx.cfg.parameters));
  const std::size_t m = fs.size();
  std::vector<ScalarField> brackets;
  for (std::size_t k = 0; k < m; ++k) brackets.push_back(bracket_field(s, fs[k], fs[(k + 1) % m]));
  ScalarField x = parse_field("x1", c);
  ScalarField y = parse_field("y1", c);
  ScalarField z = parse_field("z", c);
  ScalarField one = ScalarField::constant(c.dim(), 1.0);

  std::mt19937_64 rng(ctx.seed);
  std::vector<Point> points = draw_points(rng, c.dim(), ctx.cfg.samples, ctx.cfg.radius);
  enum { kAnti, kJacobi, kLeibniz, kCoordXY, kCoordOneZ, kCommutator, kCount };
  auto rows = ordered_map<std::array<double, kCount>>(
      points.size(),
      [&](std::size_t i) {
        const Point& p = points[i];
        std::array<double, kCount> r{};
        Eigen::VectorXd e = s.e_field(p);
        for (std::size_t k = 0; k < m; ++k) {
          const ScalarField& f = fs[k];
          const ScalarField& g = fs[(k + 1) % m];
          const ScalarField& h = fs[(k + 2) % m];
          r[kAnti] = std::max(r[kAnti], std::abs(jacobi_bracket(s, f, g, p) + jacobi_bracket(s, g, f, p)));
          r[kJacobi] = std::max(r[kJacobi], jacobi_identity_residual(s, f, g, h, p));
          const double expect = -f(p) * g(p) * e.dot(gradient(h, p));
          r[kLeibniz] = std::max(r[kLeibniz], std::abs(leibniz_defect(s, f, g, h, p) - expect));
          if (contact) {
            Eigen::VectorXd comm = lie_bracket(hamiltonian_field({c, f}), hamiltonian_field({c, g}), p);
            r[kCommutator] = std::max(r[kCommutator], (comm - hamiltonian_vector({c, brackets[k]}, p)).norm());
          }
        }
        if (contact) {
          r[kCoordXY] = std::abs(jacobi_bracket(s, x, y, p) + 1.0);
          r[kCoordOneZ] = std::abs(jacobi_bracket(s, one, z, p) + 1.0);
        }
        return r;
      },
      workers(ctx));
  std::array<double, kCount> worst{};
  for (const auto& r : rows)
    for (int k = 0; k < kCount; ++k) worst[k] = std::max(worst[k], r[k]);

  const std::size_t n = points.size();
  json ids;
  ids["antisymmetry"] = identity(worst[kAnti], kIdentityTol, n);
  ids["jacobi_identity"] = identity(worst[kJacobi], kIdentityTol, n);
  ids["leibniz"] = identity(worst[kLeibniz], kIdentityTol, n);
  if (contact) {
    ids["coordinate_x1_y1"] = identity(worst[kCoordXY], kIdentityTol, n);
    ids["coordinate_one_z"] = identity(worst[kCoordOneZ], kIdentityTol, n);
    ids["hamiltonian_commutator"] = identity(worst[kCommutator], kIdentityTol, n);
  }
  json report = header(ctx, "check brackets");
  report["structure"] = s.name();
  report["functions"] = src;
  report["identities"] = ids;
  const bool passed = all_passed(ids);
  report["passed"] = passed;
  Outputs o(ctx);
  o.add_json("check_brackets.json", report);
  announce(ctx, out, std::string("check brackets: ") + (passed ? "pass" : "FAIL"), o.commit());
  return passed ? kPass : kChecksFailed;
}

// ---- check submanifold ----------------------------------------------------

int check_submanifold(const Context& ctx, std::ostream& out) {
  if (!ctx.cfg.submanifold) throw ConfigError("config: 'submanifold' is required for check submanifold");
  const DarbouxChart& c = ctx.chart;
  const SubmanifoldBlock& block = *ctx.cfg.submanifold;
  std::mt19937_64 rng(ctx.seed);
  json report = header(ctx, "check submanifold");
  bool passed = false;

  if (!block.constraints.empty()) {
    std::vector<ScalarField> phi;
    for (const auto& s : block.constraints) phi.push_back(parse_field(s, c, ctx.cfg.parameters));
    LevelSetSubmanifold n(c, phi);
    std::vector<Point> starts = draw_points(rng, c.dim(), ctx.cfg.samples, ctx.cfg.radius);
    CoisotropyReport r = is_coisotropic(n, starts);
    report["kind"] = "constraints";
    report["constraints"] = block.constraints;
    report["codim"] = n.codim();
    report["coisotropic"] = r.coisotropic;
    report["max_residual"] = r.max_residual;
    report["max_frame_residual"] = r.max_frame_residual;
    report["frame_disagreement"] = r.frame_disagreement;
    report["tolerance"] = 1e-9;
    report["samples"] = r.samples;
    report["rejected"] = r.rejected;
    if (r.coisotropic) {
      double inv = 0.0;
      for (const auto& s : starts)
        if (auto p = n.project(s)) inv = std::max(inv, characteristic_involutivity_residual(n, *p));
      report["characteristic_involutivity"] = inv;
    }
    passed = r.coisotropic && r.samples > 0;
  } else {
    const Parametrization& pz = *block.parametrization;
    VariableTable vars = VariableTable::parameters(pz.parameters);
    std::vector<ScalarField> psi;
    for (const auto& s : pz.components) psi.push_back(parse_field(s, vars, ctx.cfg.parameters));
    ParamSubmanifold l(c, pz.parameters, psi);
    std::vector<Eigen::VectorXd> params = draw_points(rng, pz.parameters, ctx.cfg.samples, pz.range);
    IsotropyReport r = is_isotropic(l, params);
    report["kind"] = "parametrization";
    report["components"] = pz.components;
    report["k"] = r.k;
    report["max_eta"] = r.max_eta;
    report["tolerance"] = 1e-9;
    report["isotropic"] = r.isotropic;
    report["legendrian"] = r.legendrian;
    report["samples"] = r.samples;
    passed = r.isotropic;
  }
  report["passed"] = passed;
  Outputs o(ctx);
  o.add_json("check_submanifold.json", report);
  announce(ctx, out, std::string("check submanifold: ") + (passed ? "pass" : "FAIL"), o.commit());
  return passed ? kPass : kChecksFailed;
}

// ---- check lift / lift-check ----------------------------------------------

VectorFieldExpr lift_field(const Context& ctx, std::string& label) {
  if (!ctx.cfg.vector_field.empty()) {
    label = "vector_field";
    return make_field(ctx.chart, ctx.cfg.vector_field, ctx.cfg.parameters);
  }
  label = "hamiltonian";
  return hamiltonian_field(make_system(ctx));
}

json legendrian_image_block(const Context& ctx, const VectorFieldExpr& x, const std::vector<Point>& samples) {
  ImageReport r = legendrian_image_residual(ctx.chart, x, samples);
  HamiltonianCheck h = is_hamiltonian(ctx.chart, x, samples);
  json j;
  j["residual"] = r.max_residual;
  j["tolerance"] = kIdentityTol;
  j["image_dim"] = r.image_dim;
  j["legendrian_dim"] = r.legendrian_dim;
  j["samples"] = r.samples;
  j["hamiltonian_defect"] = h.max_defect;
  j["passed"] = r.legendrian(kIdentityTol);
  return j;
}

int check_lift(const Context& ctx, std::ostream& out) {
  std::string label;
  VectorFieldExpr x = lift_field(ctx, label);
  std::mt19937_64 rng(ctx.seed);
  std::vector<Point> samples = draw_points(rng, ctx.chart.dim(), ctx.cfg.samples, ctx.cfg.radius);
  json report = header(ctx, "check lift");
  report["field"] = label;
  json ids;
  ids["legendrian_image"] = legendrian_image_block(ctx, x, samples);
  report["identities"] = ids;
  const bool passed = all_passed(ids);
  report["passed"] = passed;
  Outputs o(ctx);
  o.add_json("check_lift.json", report);
  announce(ctx, out, std::string("check lift: ") + (passed ? "pass" : "FAIL"), o.commit());
  return passed ? kPass : kChecksFailed;
}

int lift_check(const Context& ctx, std::ostream& out) {
  const DarbouxChart& c = ctx.chart;
  const int d = c.dim();
  const int ed = extended_dim(c);
  std::string label;
  VectorFieldExpr x = lift_field(ctx, label);
  VectorFieldExpr reeb = VectorFieldExpr::constant(Eigen::VectorXd::Unit(d, c.z()));
  VectorFieldExpr eta;
  for (int i = 0; i < c.n(); ++i) eta.components.push_back(-ScalarField::coordinate(d, c.y(i)));
  for (int i = 0; i < c.n(); ++i) eta.components.push_back(ScalarField::constant(d, 0.0));
  eta.components.push_back(ScalarField::constant(d, 1.0));

  std::mt19937_64 rng(ctx.seed);
  std::vector<Point> base = draw_points(rng, d, ctx.cfg.samples, ctx.cfg.radius);
  std::vector<Point> fiber = draw_points(rng, d, ctx.cfg.samples, ctx.cfg.radius);
  std::vector<Point> ts = draw_points(rng, 1, ctx.cfg.samples, ctx.cfg.radius);

  enum { kDet, kReebEta, kReebW, kFlatRv, kFlatDt, kFlatRc, kCount };
  auto rows = ordered_map<std::array<double, kCount>>(
      base.size(),
      [&](std::size_t i) {
        ExtendedPoint ep{base[i], fiber[i], ts[i](0)};
        std::array<double, kCount> r{};
        Eigen::MatrixXd flat = extended_flat_matrix(c, ep);
        Eigen::VectorXd eta_bar = extended_contact_form(c, ep);
        Eigen::VectorXd rb = extended_reeb(c);
        Eigen::VectorXd dt = Eigen::VectorXd::Unit(ed, ed - 1);
        r[kDet] = std::abs(flat.determinant());
        r[kReebEta] = std::abs(eta_bar.dot(rb) - 1.0);
        r[kReebW] = (extended_deta(c, ep) * rb).norm();
        r[kFlatRv] = (flat * vertical_lift_vector(c, reeb, ep) - eta_bar).norm();
        r[kFlatDt] = (flat * dt - vertical_lift_form(c, eta, ep)).norm();
        r[kFlatRc] = (flat * complete_lift_vector(c, reeb, ep) - (-dt + ep.t * eta_bar)).norm();
        return r;
      },
      workers(ctx));
  std::array<double, kCount> worst{};
  worst[kDet] = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    worst[kDet] = std::min(worst[kDet], r[kDet]);
    for (int k = kReebEta; k < kCount; ++k) worst[k] = std::max(worst[k], r[k]);
  }
  const std::size_t n = base.size();
  json ids;
  ids["min_abs_det_flat"] = identity(worst[kDet], 1e-9, n, false);
  ids["reeb_normalized"] = identity(worst[kReebEta], kFrameTol, n);
  ids["reeb_in_kernel"] = identity(worst[kReebW], kFrameTol, n);
  ids["flat_vertical_reeb"] = identity(worst[kFlatRv], kFrameTol, n);
  ids["flat_dt"] = identity(worst[kFlatDt], kFrameTol, n);
  ids["flat_complete_reeb"] = identity(worst[kFlatRc], kFrameTol, n);
  ids["legendrian_image"] = legendrian_image_block(ctx, x, base);

  json report = header(ctx, "lift-check");
  report["field"] = label;
  report["extended_dim"] = ed;
  report["identities"] = ids;
  const bool passed = all_passed(ids);
  report["passed"] = passed;
  Outputs o(ctx);
  o.add_json("lift_check.json", report);
  announce(ctx, out, std::string("lift-check: ") + (passed ? "pass" : "FAIL"), o.commit());
  return passed ? kPass : kChecksFailed;
}

// ---- check frame ----------------------------------------------------------

int check_frame(const Context& ctx, std::ostream& out) {
  const DarbouxChart& c = ctx.chart;
  const int d = c.dim();
  std::vector<VectorFieldExpr> a;
  std::vector<VectorFieldExpr> b;
  for (int i = 0; i < c.n(); ++i) {
    VectorFieldExpr ai = VectorFieldExpr::constant(Eigen::VectorXd::Unit(d, c.x(i)));
    ai.components[static_cast<std::size_t>(c.z())] = ScalarField::coordinate(d, c.y(i));
    a.push_back(std::move(ai));
    b.push_back(VectorFieldExpr::constant(Eigen::VectorXd::Unit(d, c.y(i))));
  }
  VectorFieldExpr reeb = VectorFieldExpr::constant(Eigen::VectorXd::Unit(d, c.z()));

  std::mt19937_64 rng(ctx.seed);
  std::vector<Point> points = draw_points(rng, d, ctx.cfg.samples, ctx.cfg.radius);
  std::vector<Point> vs = draw_points(rng, d, ctx.cfg.samples, 1.0);
  enum { kDuality, kFields, kHorizontal, kReeb, kRoundTrip, kDet, kCanonical, kCommuting, kCount };
  auto rows = ordered_map<std::array<double, kCount>>(
      points.size(),
      [&](std::size_t k) {
        const Point& p = points[k];
        std::array<double, kCount> r{};
        Frame f = c.frame(p);
        Eigen::MatrixXd vec = f.vectors();
        r[kDuality] = (f.covectors() * vec - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
        Eigen::VectorXd eta = c.eta_at(p).components;
        for (int i = 0; i < c.n(); ++i) {
          r[kFields] = std::max({r[kFields], (vec.col(i) - a[static_cast<std::size_t>(i)](p)).norm(),
                                 (vec.col(c.n() + i) - b[static_cast<std::size_t>(i)](p)).norm()});
          r[kHorizontal] = std::max({r[kHorizontal], std::abs(eta.dot(vec.col(i))), std::abs(eta.dot(vec.col(c.n() + i)))});
        }
        Eigen::VectorXd rv = c.reeb(p).components;
        r[kFields] = std::max(r[kFields], (vec.col(d - 1) - rv).norm());
        r[kReeb] = std::abs(eta.dot(rv) - 1.0) + (c.deta_matrix().transpose() * rv).norm();
        TangentVec v{p, vs[k]};
        r[kRoundTrip] = (c.sharp(p, c.flat(v)).components - v.components).norm();
        r[kDet] = std::abs(c.flat_matrix(p).determinant());
        for (int i = 0; i < c.n(); ++i) {
          const auto& ai = a[static_cast<std::size_t>(i)];
          const auto& bi = b[static_cast<std::size_t>(i)];
          r[kCanonical] = std::max(r[kCanonical], (lie_bracket(ai, bi, p) + rv).norm());
          r[kCommuting] = std::max({r[kCommuting], lie_bracket(reeb, ai, p).norm(), lie_bracket(reeb, bi, p).norm()});
          for (int j = 0; j < c.n(); ++j) {
            if (j == i) continue;
            const auto& aj = a[static_cast<std::size_t>(j)];
            const auto& bj = b[static_cast<std::size_t>(j)];
            r[kCommuting] = std::max({r[kCommuting], lie_bracket(ai, aj, p).norm(), lie_bracket(ai, bj, p).norm(),
                                      lie_bracket(bi, bj, p).norm()});
          }
        }
        return r;
      },
      workers(ctx));
  std::array<double, kCount> worst{};
  worst[kDet] = std::numeric_limits<double>::infinity();
  for (const auto& r : rows)
    for (int k = 0; k < kCount; ++k) worst[k] = k == kDet ? std::min(worst[k], r[k]) : std::max(worst[k], r[k]);
  const std::size_t n = points.size();
  json ids;
  ids["coframe_duality"] = identity(worst[kDuality], kFrameTol, n);
  ids["frame_fields"] = identity(worst[kFields], kFrameTol, n);
  ids["horizontal"] = identity(worst[kHorizontal], kFrameTol, n);
  ids["reeb"] = identity(worst[kReeb], kFrameTol, n);
  ids["flat_sharp_round_trip"] = identity(worst[kRoundTrip], kFrameTol, n);
  ids["min_abs_det_flat"] = identity(worst[kDet], 1e-9, n, false);
  ids["bracket_a_b_minus_reeb"] = identity(worst[kCanonical], kFrameTol, n);
  ids["other_brackets"] = identity(worst[kCommuting], kFrameTol, n);
  json report = header(ctx, "check frame");
  report["identities"] = ids;
  const bool passed = all_passed(ids);
  report["passed"] = passed;
  Outputs o(ctx);
  o.add_json("check_frame.json", report);
  announce(ctx, out, std::string("check frame: ") + (passed ? "pass" : "FAIL"), o.commit());
  return passed ? kPass : kChecksFailed;
}

// ---- reduce ---------------------------------------------------------------

GroupAction make_action(const Context& ctx) {
  const ActionBlock& block = *ctx.cfg.action;
  if (!block.translations.empty()) return GroupAction::translations(ctx.chart, block.translations);
  GroupAction a{ctx.chart, {}, true, {}};
  for (const auto& g : block.generators) a.generators.push_back(make_field(ctx.chart, g, ctx.cfg.parameters));
  return a;
}

json pullback_json(const ReductionReport& r) {
  json j;
  j["pullback_residual"] = r.pullback_residual;
  j["section_disagreement"] = r.section_disagreement;
  j["leaf_drift"] = r.leaf_drift;
  j["min_abs_det_flat"] = r.min_abs_det_flat;
  j["reeb_residual"] = r.reeb_residual;
  j["vertical_samples"] = r.vertical_samples;
  j["samples"] = r.samples;
  j["rejected"] = r.rejected;
  j["passed"] = r.passed;
  return j;
}

struct ReduceRun {
  ProjectedDynamicsReport projected;
  std::optional<Trajectory> reconstructed;
  double reconstruction_error = 0.0;
};

int reduce_command(const Context& ctx, std::ostream& out, std::ostream& err) {
  if (!ctx.cfg.action) throw ConfigError("config: 'action' is required for reduce");
  ContactSystem system = make_system(ctx);
  GroupAction action = make_action(ctx);
  Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(ctx.cfg.action->mu.data(),
                                                         static_cast<Eigen::Index>(ctx.cfg.action->mu.size()));
  if (ctx.cfg.integrator.method != Method::Rk4)
    throw ConfigError("integrator.method: reduce compares full and reduced flows on a shared grid; use rk4");

  json report = header(ctx, "reduce");
  Outputs o(ctx);
  ReducedSystem red = [&] {
    try {
      return reduce(system, action, mu, ctx.seed);
    } catch (const ReductionError& e) {
      switch (e.kind()) {
        case ReductionError::Kind::NonzeroMoment:
        case ReductionError::Kind::NotAdapted:
        case ReductionError::Kind::NotAbelian:
          throw ConfigError(e.what());
        default:
          throw;
      }
    }
  }();

  VariableTable red_vars = VariableTable::darboux(red.system.chart);
  const std::string h_text = to_string(red.system.hamiltonian, red_vars);
  std::vector<std::string> ambient = ctx.chart.variable_names();
  std::vector<std::string> kept_names;
  for (int s : red.kept) kept_names.push_back(ambient[static_cast<std::size_t>(s)]);

  const auto& ics = ctx.cfg.initial_conditions;
  auto runs = ordered_map<ReduceRun>(
      ics.size(),
      [&](std::size_t i) {
        ReduceRun r;
        r.projected = verify_projected_dynamics(system, action, red, ics[i], ctx.cfg.integrator);
        if (ctx.cfg.reconstruct && !r.projected.off_level) {
          r.reconstructed = reconstruct(system, action, red, r.projected.reduced, ics[i]);
          for (std::size_t k = 0; k < r.reconstructed->size(); ++k)
            r.reconstruction_error = std::max(
                r.reconstruction_error, (r.reconstructed->points[k] - r.projected.full.points[k]).norm());
        }
        return r;
      },
      workers(ctx));

  bool passed = red.pullback.passed;
  json run_list = json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const ReduceRun& r = runs[i];
    const ProjectedDynamicsReport& pd = r.projected;
    json j;
    j["index"] = i;
    j["initial_condition"] = vector_json(ics[i]);
    j["off_level"] = pd.off_level;
    j["initial_offset"] = pd.initial_offset;
    j["max_mismatch"] = pd.max_mismatch;
    j["max_moment"] = pd.max_drift;
    j["steps"] = pd.full.size();
    if (!pd.off_level) passed = passed && pd.max_mismatch <= kMismatchTol;
    std::ostringstream csv;
    csv << "t,mismatch,moment\n";
    for (std::size_t k = 0; k < pd.full.size(); ++k) {
      double jm = action.size() ? moment_map(action, pd.full.points[k]).lpNorm<Eigen::Infinity>() : 0.0;
      csv << num(pd.full.times[k]) << ',' << num(pd.mismatch[k]) << ',' << num(jm) << '\n';
    }
    o.add("mismatch_" + std::to_string(i) + ".csv", csv.str());
    if (r.reconstructed) {
      j["reconstruction_error"] = r.reconstruction_error;
      passed = passed && r.reconstruction_error <= kMismatchTol;
      std::ostringstream rc;
      rc << 't';
      for (const auto& name : ambient) rc << ',' << name;
      rc << ",error\n";
      for (std::size_t k = 0; k < r.reconstructed->size(); ++k) {
        rc << num(r.reconstructed->times[k]);
        for (Eigen::Index q = 0; q < r.reconstructed->points[k].size(); ++q)
          rc << ',' << num(r.reconstructed->points[k](q));
        rc << ',' << num((r.reconstructed->points[k] - pd.full.points[k]).norm()) << '\n';
      }
      o.add("reconstruction_" + std::to_string(i) + ".csv", rc.str());
    } else if (ctx.cfg.reconstruct) {
      j["reconstruction_skipped"] = "initial condition is off the zero level of the moment map";
    }
    if (pd.off_level && !ctx.opt.quiet)
      err << "warning: initial condition " << i << " is off J^-1(0) by " << num(pd.initial_offset)
          << "; its mismatch is reported but not checked\n";
    run_list.push_back(j);
  }

  json reduced_cfg;
  reduced_cfg["chart"]["n"] = red.system.chart.n();
  reduced_cfg["hamiltonian"] = h_text;
  reduced_cfg["integrator"] = {{"method", to_string(ctx.cfg.integrator.method)},
                               {"t0", ctx.cfg.integrator.t0},
                               {"t1", ctx.cfg.integrator.t1},
                               {"step", ctx.cfg.integrator.step}};
  json red_ics = json::array();
  for (const auto& p : ics) red_ics.push_back(vector_json(red.projection(p)));
  reduced_cfg["initial_conditions"] = red_ics;
  reduced_cfg["output"]["prefix"] = ctx.cfg.prefix + "_reduced";

  report["reduced"] = {{"n", red.system.chart.n()},
                       {"hamiltonian", h_text},
                       {"kept", kept_names},
                       {"mu", ctx.cfg.action->mu}};
  report["invariance"] = red.invariance;
  report["substitution"] = red.substitution;
  report["pullback"] = pullback_json(red.pullback);
  report["tolerance"] = kMismatchTol;
  report["runs"] = run_list;
  report["passed"] = passed;
  o.add_json("reduced.json", reduced_cfg);
  o.add_json("reduce.json", report);
  announce(ctx, out, std::string("reduce: H_mu = ") + h_text + (passed ? " (pass)" : " (FAIL)"), o.commit());
  return passed ? kPass : kChecksFailed;
}

}  // namespace

int cmd_integrate(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Context ctx = load(opt);
    ContactSystem system = make_system(ctx);
    const auto& ics = ctx.cfg.initial_conditions;
    if (ics.empty()) throw ConfigError("config: 'initial_conditions' is required for integrate");
    auto runs = ordered_map<Trajectory>(
        ics.size(), [&](std::size_t i) { return integrate(system, ics[i], ctx.cfg.integrator); }, workers(ctx));

    Outputs o(ctx);
    json report = header(ctx, "integrate");
    report["hamiltonian"] = ctx.cfg.hamiltonian;
    report["method"] = to_string(ctx.cfg.integrator.method);
    json list = json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const Trajectory& tr = runs[i];
      double energy = 0.0, div = 0.0, monitor = 0.0, conformal = 0.0;
      for (const auto& m : tr.monitors) {
        energy = std::max(energy, m.energy_defect);
        div = std::max(div, m.divergence_defect);
        monitor = std::max(monitor, m.monitor_defect);
        conformal = std::max(conformal, m.conformal_residual);
      }
      json j;
      j["index"] = i;
      j["steps"] = tr.size() - 1;
      j["t_end"] = tr.times.back();
      j["endpoint"] = vector_json(tr.points.back());
      j["H0"] = tr.monitors.front().hamiltonian;
      j["H_end"] = tr.monitors.back().hamiltonian;
      j["max_energy_defect"] = energy;
      j["max_div_defect"] = div;
      j["max_monitor_defect"] = monitor;
      j["max_conformal_residual"] = conformal;
      list.push_back(j);
      o.add("trajectory_" + std::to_string(i) + ".csv", trajectory_csv(ctx.chart, tr));
    }
    report["runs"] = list;
    o.add_json("integrate.json", report);
    announce(ctx, out, "integrate: " + std::to_string(runs.size()) + " trajectories", o.commit());
    return static_cast<int>(kPass);
  });
}

int cmd_check(const Options& opt, const std::string& what, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (what != "brackets" && what != "submanifold" && what != "lift" && what != "frame")
      throw ConfigError("check: unknown target '" + what + "' (brackets, submanifold, lift, frame)");
    Context ctx = load(opt);
    if (what == "brackets") return check_brackets(ctx, out);
    if (what == "submanifold") return check_submanifold(ctx, out);
    if (what == "lift") return check_lift(ctx, out);
    return check_frame(ctx, out);
  });
}

int cmd_reduce(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Context ctx = load(opt);
    try {
      return reduce_command(ctx, out, err);
    } catch (const ReductionError& e) {
      err << "reduction failed: " << e.what() << " (value " << num(e.value()) << ")\n";
      json report = header(ctx, "reduce");
      report["error"] = e.what();
      report["value"] = e.value();
      report["passed"] = false;
      Outputs o(ctx);
      o.add_json("reduce.json", report);
      announce(ctx, out, "reduce: FAIL", o.commit());
      return static_cast<int>(kChecksFailed);
    }
  });
}

int cmd_lift_check(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Context ctx = load(opt);
    return lift_check(ctx, out);
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contact Hamiltonian mechanics on Darboux charts", "darboux"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  Options opt;
  std::uint64_t seed = 0;
  std::string what;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "scenario file (JSON)")->required();
    sub->add_option("--out", opt.out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_flag("--quiet", opt.quiet, "no progress output");
    sub->add_option("--workers", opt.workers, "worker threads (0: all cores)")->capture_default_str();
  };
  CLI::App* integrate = app.add_subcommand("integrate", "integrate trajectories and write CSV and JSON");
  CLI::App* check = app.add_subcommand("check", "run an identity suite and write a JSON report");
  check->add_option("what", what, "brackets | submanifold | lift | frame")
      ->required()
      ->check(CLI::IsMember({"brackets", "submanifold", "lift", "frame"}));
  CLI::App* reduce = app.add_subcommand("reduce", "reduce by a translation symmetry at mu = 0");
  CLI::App* lift = app.add_subcommand("lift-check", "check the contact structure of TM x R and a Legendrian image");
  for (CLI::App* sub : {integrate, check, reduce, lift}) common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? static_cast<int>(kPass) : static_cast<int>(kConfigError);
  }
  for (CLI::App* sub : {integrate, check, reduce, lift})
    if (sub->count("--seed")) opt.seed = seed;

  if (integrate->parsed()) return cmd_integrate(opt, out, err);
  if (check->parsed()) return cmd_check(opt, what, out, err);
  if (reduce->parsed()) return cmd_reduce(opt, out, err);
  return cmd_lift_check(opt, out, err);
}

}  // namespace darboux::cli
