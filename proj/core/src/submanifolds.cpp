#include "darboux/submanifolds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "darboux/calculus.hpp"
#include "darboux/jacobi.hpp"
#include "darboux/linalg.hpp"

namespace darboux {

std::string to_string(PointClass c) {
  switch (c) {
    case PointClass::Horizontal:
      return "horizontal";
    case PointClass::Vertical:
      return "vertical";
    case PointClass::Oblique:
      return "oblique";
  }
  return "?";
}

Eigen::VectorXd contact_sharp_lambda(const DarbouxChart& chart, const Point& p, const Eigen::VectorXd& alpha) {
  TangentVec v = chart.sharp(p, {p, alpha});
  TangentVec r = chart.reeb(p);
  return v.components - alpha.dot(r.components) * r.components;
}

// ---------------------------------------------------------------------------

LevelSetSubmanifold::LevelSetSubmanifold(DarbouxChart chart, std::vector<ScalarField> constraints)
    : chart_(chart), constraints_(std::move(constraints)) {
  if (constraints_.empty()) throw DimensionError("level set needs at least one constraint");
  if (codim() > chart_.dim()) throw DimensionError("more constraints than ambient dimensions");
  for (const auto& c : constraints_)
    if (c.dim() != chart_.dim()) throw DimensionError("constraint defined on the wrong dimension");
}

Eigen::VectorXd LevelSetSubmanifold::values(const Point& p) const {
  Eigen::VectorXd v(codim());
  for (int a = 0; a < codim(); ++a) v(a) = constraints_[static_cast<std::size_t>(a)](p);
  return v;
}

Eigen::MatrixXd LevelSetSubmanifold::constraint_jacobian(const Point& p) const {
  Eigen::MatrixXd j(codim(), chart_.dim());
  for (int a = 0; a < codim(); ++a) j.row(a) = gradient(constraints_[static_cast<std::size_t>(a)], p).transpose();
  return j;
}

bool LevelSetSubmanifold::is_regular(const Point& p) const {
  return linalg::rank(constraint_jacobian(p)) == codim();
}

Eigen::MatrixXd LevelSetSubmanifold::tangent_basis(const Point& p) const {
  Eigen::MatrixXd j = constraint_jacobian(p);
  if (linalg::rank(j) != codim()) throw RankError("constraint Jacobian is rank-deficient");
  return linalg::nullspace(j);
}

std::optional<Point> LevelSetSubmanifold::project(const Point& start, int max_iter, double tol) const {
  chart_.validate(start);
  Point x = start;
  for (int it = 0; it <= max_iter; ++it) {
    Eigen::VectorXd phi;
    try {
      phi = values(x);
    } catch (const DomainError&) {
      return std::nullopt;
    }
    if (!phi.allFinite()) return std::nullopt;
    if (phi.lpNorm<Eigen::Infinity>() <= tol) return x;
    if (it == max_iter) break;
    Eigen::MatrixXd j = constraint_jacobian(x);
    if (linalg::rank(j) != codim()) return std::nullopt;
    x -= j.completeOrthogonalDecomposition().solve(phi);
  }
  return std::nullopt;
}

SampleSet LevelSetSubmanifold::sample(std::mt19937_64& rng, std::size_t count, double radius) const {
  std::uniform_real_distribution<double> u(-radius, radius);
  SampleSet out;
  const std::size_t max_draws = 20 * count + 20;
  for (std::size_t draw = 0; draw < max_draws && out.points.size() < count; ++draw) {
    Point p(chart_.dim());
    for (int i = 0; i < chart_.dim(); ++i) p(i) = u(rng);
    auto q = project(p);
    if (q && is_regular(*q))
      out.points.push_back(*q);
    else
      ++out.rejected;
  }
  return out;
}

// ---------------------------------------------------------------------------

ParamSubmanifold::ParamSubmanifold(DarbouxChart chart, int k, std::vector<ScalarField> psi)
    : chart_(chart), k_(k), psi_(std::move(psi)) {
  if (k_ < 0) throw DimensionError("negative parameter count");
  if (static_cast<int>(psi_.size()) != chart_.dim())
    throw DimensionError("parametrization needs one component per chart coordinate");
  for (const auto& c : psi_)
    if (c.dim() != k_) throw DimensionError("parametrization component has the wrong number of parameters");
}

Point ParamSubmanifold::point(const Eigen::VectorXd& params) const {
  if (params.size() != k_) throw DimensionError("wrong number of parameters");
  Point p(chart_.dim());
  for (int i = 0; i < chart_.dim(); ++i) p(i) = psi_[static_cast<std::size_t>(i)](params);
  return p;
}

Eigen::MatrixXd ParamSubmanifold::jacobian(const Eigen::VectorXd& params) const {
  if (params.size() != k_) throw DimensionError("wrong number of parameters");
  Eigen::MatrixXd t(chart_.dim(), k_);
  for (int i = 0; i < chart_.dim(); ++i) t.row(i) = gradient(psi_[static_cast<std::size_t>(i)], params).transpose();
  return t;
}

Eigen::MatrixXd ParamSubmanifold::tangent(const Eigen::VectorXd& params) const {
  Eigen::MatrixXd t = jacobian(params);
  if (linalg::rank(t) < k_) throw RankError("parametrization is not an immersion at this parameter");
  return t;
}

ParamSubmanifold ParamSubmanifold::fix_parameter(int slot, double value) const {
  if (slot < 0 || slot >= k_) throw DimensionError("fix_parameter: slot out of range");
  std::vector<ScalarField> args;
  for (int j = 0; j < k_; ++j) {
    if (j == slot)
      args.push_back(ScalarField::constant(k_ - 1, value));
    else
      args.push_back(ScalarField::coordinate(k_ - 1, j < slot ? j : j - 1));
  }
  std::vector<ScalarField> psi;
  for (const auto& c : psi_) psi.push_back(c.compose(args));
  return {chart_, k_ - 1, std::move(psi)};
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd contact_complement(const DarbouxChart& chart, const Point& p, const Eigen::MatrixXd& basis) {
  chart.validate(p);
  if (basis.rows() != chart.dim()) throw DimensionError("distribution basis has the wrong row count");
  linalg::require_independent(basis, "distribution basis");
  Eigen::MatrixXd ann = linalg::nullspace(basis.transpose());
  Eigen::MatrixXd images(chart.dim(), ann.cols());
  for (Eigen::Index j = 0; j < ann.cols(); ++j) images.col(j) = contact_sharp_lambda(chart, p, ann.col(j));
  return linalg::orthonormal_basis(images);
}

Eigen::MatrixXd deta_complement_horizontal(const DarbouxChart& chart, const Point& p, const Eigen::MatrixXd& basis) {
  chart.validate(p);
  if (basis.rows() != chart.dim()) throw DimensionError("distribution basis has the wrong row count");
  linalg::require_independent(basis, "distribution basis");
  Eigen::MatrixXd rows(basis.cols() + 1, chart.dim());
  rows.topRows(basis.cols()) = basis.transpose() * chart.deta_matrix();
  rows.bottomRows(1) = chart.eta_at(p).components.transpose();
  return linalg::nullspace(rows);
}

namespace {

bool is_horizontal(const DarbouxChart& chart, const Point& p, const Eigen::MatrixXd& basis) {
  Eigen::MatrixXd q = linalg::orthonormal_basis(basis);
  return (chart.eta_at(p).components.transpose() * q).lpNorm<Eigen::Infinity>() <= linalg::kRankTol;
}

}  // namespace

int expected_complement_dim(const DarbouxChart& chart, const Point& p, const Eigen::MatrixXd& basis) {
  linalg::require_independent(basis, "distribution basis");
  const int k = static_cast<int>(basis.cols());
  return is_horizontal(chart, p, basis) ? 2 * chart.n() - k : 2 * chart.n() + 1 - k;
}

PointClass classify_point(const DarbouxChart& chart, const Point& p, const Eigen::MatrixXd& basis) {
  chart.validate(p);
  if (basis.rows() != chart.dim()) throw DimensionError("distribution basis has the wrong row count");
  linalg::require_independent(basis, "distribution basis");
  if (is_horizontal(chart, p, basis)) return PointClass::Horizontal;
  if (linalg::distance_to_span(basis, chart.reeb(p).components) <= linalg::kRankTol) return PointClass::Vertical;
  return PointClass::Oblique;
}

// ---------------------------------------------------------------------------

IsotropyReport is_isotropic(const ParamSubmanifold& l, const std::vector<Eigen::VectorXd>& params, double tol) {
  IsotropyReport out;
  out.k = l.k();
  out.n = l.chart().n();
  for (const auto& s : params) {
    Eigen::MatrixXd t = l.tangent(s);
    Eigen::VectorXd eta = l.chart().eta_at(l.point(s)).components;
    out.max_eta = std::max(out.max_eta, (eta.transpose() * t).lpNorm<Eigen::Infinity>());
    ++out.samples;
  }
  out.isotropic = out.samples > 0 && out.max_eta <= tol;
  out.legendrian = out.isotropic && out.k == out.n;
  return out;
}

IsotropyReport is_legendrian(const ParamSubmanifold& l, const std::vector<Eigen::VectorXd>& params, double tol) {
  return is_isotropic(l, params, tol);
}

CoisotropyReport is_coisotropic(const LevelSetSubmanifold& n, const std::vector<Point>& starts, double tol) {
  const DarbouxChart& chart = n.chart();
  CoisotropyReport out;
  for (const auto& start : starts) {
    auto p = n.project(start);
    if (!p) {
      ++out.rejected;
      continue;
    }
    Eigen::MatrixXd j = n.constraint_jacobian(*p);
    if (linalg::rank(j) != n.codim()) throw RankError("constraint Jacobian is rank-deficient at a sample");
    for (int a = 0; a < n.codim(); ++a) {
      Eigen::VectorXd za = contact_sharp_lambda(chart, *p, j.row(a).transpose());
      for (int b = 0; b < n.codim(); ++b) {
        const double zab = j.row(b).dot(za);
        // A_i = d/dx^i + y_i d/dz, B^i = d/dy_i.
        double frame = 0.0;
        for (int i = 0; i < chart.n(); ++i) {
          const double yi = (*p)(chart.y(i));
          const double a_a = j(a, chart.x(i)) + yi * j(a, chart.z());
          const double a_b = j(b, chart.x(i)) + yi * j(b, chart.z());
          frame += a_a * j(b, chart.y(i)) - j(a, chart.y(i)) * a_b;
        }
        out.max_residual = std::max(out.max_residual, std::abs(zab));
        out.max_frame_residual = std::max(out.max_frame_residual, std::abs(frame));
        out.frame_disagreement = std::max(out.frame_disagreement, std::abs(zab + frame));
      }
    }
    ++out.samples;
  }
  out.coisotropic = out.samples > 0 && out.max_residual <= tol;
  return out;
}

namespace {

Point project_or_throw(const LevelSetSubmanifold& n, const Point& p) {
  auto q = n.project(p);
  if (!q) throw Error("point could not be projected onto the level set");
  return *q;
}

Eigen::MatrixXd characteristic_at(const LevelSetSubmanifold& n, const Point& p) {
  const DarbouxChart& chart = n.chart();
  Eigen::MatrixXd t = n.tangent_basis(p);
  Eigen::MatrixXd rows(1 + t.cols(), t.cols());
  rows.topRows(1) = chart.eta_at(p).components.transpose() * t;
  rows.bottomRows(t.cols()) = t.transpose() * chart.deta_matrix().transpose() * t;
  Eigen::MatrixXd c = linalg::nullspace(rows);
  return t * c;
}

}  // namespace

Eigen::MatrixXd characteristic_distribution(const LevelSetSubmanifold& n, const Point& p) {
  return characteristic_at(n, project_or_throw(n, p));
}

Eigen::MatrixXd constraint_hamiltonian_span(const LevelSetSubmanifold& n, const Point& p) {
  Eigen::MatrixXd j = n.constraint_jacobian(p);
  Eigen::MatrixXd z(n.chart().dim(), n.codim());
  for (int a = 0; a < n.codim(); ++a) z.col(a) = contact_sharp_lambda(n.chart(), p, j.row(a).transpose());
  return z;
}

double characteristic_involutivity_residual(const LevelSetSubmanifold& n, const Point& p) {
  Point q = project_or_throw(n, p);
  Eigen::MatrixXd span = characteristic_at(n, q);
  JacobiStructure s = JacobiStructure::contact(n.chart());
  std::vector<VectorFieldExpr> z;
  for (const auto& phi : n.constraints()) {
    z.push_back(VectorFieldExpr::from_function(n.chart().dim(), "Z", [s, phi](auto x) {
      auto g = gradient(phi, x);
      using T = typename decltype(g)::value_type;
      return s.sharp_lambda_generic(x, std::span<const T>(g));
    }));
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < z.size(); ++a)
    for (std::size_t b = a + 1; b < z.size(); ++b)
      worst = std::max(worst, linalg::distance_to_span(span, lie_bracket(z[a], z[b], q)));
  return worst;
}

// ---------------------------------------------------------------------------

QuotientProjection QuotientProjection::coordinate(const DarbouxChart& ambient, const DarbouxChart& quotient,
                                                  const std::vector<int>& keep) {
  if (static_cast<int>(keep.size()) != quotient.dim())
    throw DimensionError("projection must keep exactly one slot per quotient coordinate");
  QuotientProjection pi{quotient, {}};
  for (int slot : keep) pi.components.push_back(ScalarField::coordinate(ambient.dim(), slot));
  return pi;
}

Point QuotientProjection::operator()(const Point& p) const {
  Point out(quotient.dim());
  for (int i = 0; i < quotient.dim(); ++i) out(i) = components[static_cast<std::size_t>(i)](p);
  return out;
}

Eigen::MatrixXd QuotientProjection::differential(const Point& p) const {
  Eigen::MatrixXd d(quotient.dim(), p.size());
  for (int i = 0; i < quotient.dim(); ++i) d.row(i) = gradient(components[static_cast<std::size_t>(i)], p).transpose();
  return d;
}

ReductionReport verify_coisotropic_reduction(const LevelSetSubmanifold& n, const QuotientProjection& pi,
                                             const std::vector<Point>& starts, double tol) {
  const DarbouxChart& chart = n.chart();
  const DarbouxChart& qc = pi.quotient;
  if (static_cast<int>(pi.components.size()) != qc.dim()) throw DimensionError("projection has wrong arity");
  ReductionReport out;
  out.min_abs_det_flat = std::numeric_limits<double>::infinity();
  for (const auto& start : starts) {
    auto maybe = n.project(start);
    if (!maybe) {
      ++out.rejected;
      continue;
    }
    const Point& p = *maybe;
    Eigen::MatrixXd t = n.tangent_basis(p);
    Eigen::MatrixXd dpi = pi.differential(p);
    Eigen::MatrixXd pt = dpi * t;
    Eigen::RowVectorXd eta_t = chart.eta_at(p).components.transpose() * t;
    if (eta_t.lpNorm<Eigen::Infinity>() <= tol)
      throw ReductionError(ReductionError::Kind::HorizontalPoint, "the level set is horizontal at a sample");
    if (linalg::rank(pt) != qc.dim()) throw RankError("projection restricted to the level set is not a submersion");

    Eigen::MatrixXd chi = characteristic_at(n, p);
    double drift = 0.0;
    for (Eigen::Index j = 0; j < chi.cols(); ++j) drift = std::max(drift, (dpi * chi.col(j)).norm());
    Eigen::MatrixXd kernel = linalg::nullspace(pt);
    double disagreement = 0.0;
    for (Eigen::Index j = 0; j < kernel.cols(); ++j)
      disagreement = std::max(disagreement, std::abs(eta_t.dot(kernel.col(j))));
    out.leaf_drift = std::max(out.leaf_drift, drift);
    out.section_disagreement = std::max(out.section_disagreement, disagreement);
    if (drift > tol || disagreement > tol)
      throw ReductionError(ReductionError::Kind::LeafMismatch,
                           "declared projection is not constant on characteristic leaves",
                           std::max(drift, disagreement));

    // eta~ at pi(p) through the section e_j -> T c_j with (D pi T) c_j = e_j.
    auto cod = pt.completeOrthogonalDecomposition();
    Eigen::VectorXd eta_section(qc.dim());
    for (int j = 0; j < qc.dim(); ++j) eta_section(j) = eta_t.dot(cod.solve(Eigen::VectorXd::Unit(qc.dim(), j)));
    const Point pq = pi(p);
    Eigen::VectorXd eta_q = qc.eta_at(pq).components;
    const double pullback = std::max((eta_q.transpose() * pt - eta_t).lpNorm<Eigen::Infinity>(),
                                     (eta_section - eta_q).lpNorm<Eigen::Infinity>());
    out.pullback_residual = std::max(out.pullback_residual, pullback);

    Eigen::MatrixXd flat = qc.deta_matrix().transpose() + eta_section * eta_section.transpose();
    out.min_abs_det_flat = std::min(out.min_abs_det_flat, std::abs(flat.determinant()));

    Eigen::VectorXd r = chart.reeb(p).components;
    if (linalg::distance_to_span(t, r) <= tol) {
      ++out.vertical_samples;
      out.reeb_residual = std::max(out.reeb_residual, (dpi * r - qc.reeb(pq).components).norm());
    }
    ++out.samples;
  }
  if (out.samples == 0) out.min_abs_det_flat = 0.0;
  out.passed = out.samples > 0 && out.pullback_residual <= tol && out.min_abs_det_flat > 1e-9 &&
               out.reeb_residual <= tol;
  return out;
}

ParamSubmanifold project(const ParamSubmanifold& l, const QuotientProjection& pi) {
  if (pi.components.empty() || pi.components.front().dim() != l.chart().dim())
    throw DimensionError("projection does not start from the submanifold's chart");
  std::vector<ScalarField> psi;
  for (const auto& c : pi.components) psi.push_back(c.compose(l.components()));
  return {pi.quotient, l.k(), std::move(psi)};
}

LegendrianProjectionReport verify_legendrian_projection(const ParamSubmanifold& l, const LevelSetSubmanifold& n,
                                                        const QuotientProjection& pi,
                                                        const std::vector<Eigen::VectorXd>& params, double tol) {
  LegendrianProjectionReport out;
  out.image_rank = pi.quotient.dim();
  for (const auto& s : params) {
    const Point p = l.point(s);
    Eigen::MatrixXd t = l.tangent(s);
    out.max_constraint = std::max(out.max_constraint, n.values(p).lpNorm<Eigen::Infinity>());
    out.max_eta = std::max(out.max_eta, (l.chart().eta_at(p).components.transpose() * t).lpNorm<Eigen::Infinity>());
    Eigen::MatrixXd image = linalg::orthonormal_basis(pi.differential(p) * t);
    out.image_rank = std::min(out.image_rank, static_cast<int>(image.cols()));
    Eigen::VectorXd eta_q = pi.quotient.eta_at(pi(p)).components;
    out.max_eta_reduced = std::max(out.max_eta_reduced, (eta_q.transpose() * image).lpNorm<Eigen::Infinity>());
    ++out.samples;
  }
  if (out.samples == 0) out.image_rank = 0;
  out.legendrian = out.samples > 0 && l.k() == l.chart().n() && out.max_constraint <= tol && out.max_eta <= tol &&
                   out.max_eta_reduced <= tol && out.image_rank == pi.quotient.n();
  return out;
}

}  // namespace darboux
