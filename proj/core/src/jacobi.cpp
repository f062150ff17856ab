#include "darboux/jacobi.hpp"

namespace darboux {

TwoFormExpr TwoFormExpr::from_pairs(int dim, const std::vector<std::tuple<int, int, ScalarField>>& pairs) {
  TwoFormExpr out;
  out.dim = dim;
  const auto d = static_cast<std::size_t>(dim);
  out.entries.assign(d * d, ScalarField::constant(dim, 0.0));
  for (const auto& [i, j, f] : pairs) {
    if (i < 0 || j < 0 || i >= dim || j >= dim || i == j) throw DimensionError("TwoFormExpr: bad index pair");
    if (f.dim() != dim) throw DimensionError("TwoFormExpr: coefficient has wrong dimension");
    out.entries[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(j)] = f;
    out.entries[static_cast<std::size_t>(j) * d + static_cast<std::size_t>(i)] = -f;
  }
  return out;
}

JacobiStructure JacobiStructure::contact(const DarbouxChart& chart) {
  JacobiStructure s(Kind::Contact, chart.dim());
  s.chart_ = std::make_shared<const DarbouxChart>(chart);
  return s;
}

JacobiStructure JacobiStructure::cosymplectic(const DarbouxChart& chart) {
  JacobiStructure s(Kind::Cosymplectic, chart.dim());
  s.chart_ = std::make_shared<const DarbouxChart>(chart);
  return s;
}

JacobiStructure JacobiStructure::lcs(TwoFormExpr omega, VectorFieldExpr lee_form) {
  if (omega.dim <= 0 || omega.dim % 2 != 0) throw DimensionError("lcs: the manifold dimension must be even");
  if (static_cast<int>(omega.entries.size()) != omega.dim * omega.dim)
    throw DimensionError("lcs: two-form has wrong number of entries");
  if (lee_form.dim() != omega.dim) throw DimensionError("lcs: Lee form has wrong number of components");
  JacobiStructure s(Kind::Lcs, omega.dim);
  s.omega_ = std::make_shared<const TwoFormExpr>(std::move(omega));
  s.lee_ = std::make_shared<const VectorFieldExpr>(std::move(lee_form));
  return s;
}

std::string JacobiStructure::name() const {
  switch (kind_) {
    case Kind::Contact:
      return "contact";
    case Kind::Cosymplectic:
      return "cosymplectic";
    case Kind::Lcs:
      return "lcs";
  }
  return "?";
}

Eigen::MatrixXd JacobiStructure::lambda_matrix(const Eigen::VectorXd& p) const {
  if (p.size() != dim_) throw DimensionError("lambda_matrix: wrong point dimension");
  std::vector<double> l = lambda_matrix(as_span(p));
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(l.data(), dim_, dim_);
}

double JacobiStructure::lambda(const Eigen::VectorXd& p, const Eigen::VectorXd& alpha,
                               const Eigen::VectorXd& beta) const {
  if (alpha.size() != dim_ || beta.size() != dim_) throw DimensionError("lambda: wrong covector dimension");
  return alpha.dot(lambda_matrix(p) * beta);
}

Eigen::VectorXd JacobiStructure::e_field(const Eigen::VectorXd& p) const {
  if (p.size() != dim_) throw DimensionError("e_field: wrong point dimension");
  return to_eigen(e_field(as_span(p)));
}

Eigen::VectorXd JacobiStructure::sharp_lambda(const Eigen::VectorXd& p, const Eigen::VectorXd& alpha) const {
  if (p.size() != dim_ || alpha.size() != dim_) throw DimensionError("sharp_lambda: wrong dimension");
  if (kind_ == Kind::Contact) {
    TangentVec v = chart_->sharp(p, {p, alpha});
    TangentVec r = chart_->reeb(p);
    return v.components - alpha.dot(r.components) * r.components;
  }
  return lambda_matrix(p).transpose() * alpha;
}

double jacobi_bracket(const JacobiStructure& s, const ScalarField& f, const ScalarField& g, const Eigen::VectorXd& p) {
  if (p.size() != s.dim()) throw DimensionError("jacobi_bracket: wrong point dimension");
  return jacobi_bracket_at(s, f, g, as_span(p));
}

ScalarField bracket_field(const JacobiStructure& s, const ScalarField& f, const ScalarField& g) {
  if (f.dim() != s.dim() || g.dim() != s.dim()) throw DimensionError("bracket_field: dimension mismatch");
  return ScalarField::from_function(s.dim(), "bracket", [s, f, g](auto p) { return jacobi_bracket_at(s, f, g, p); });
}

double leibniz_defect(const JacobiStructure& s, const ScalarField& f, const ScalarField& g, const ScalarField& h,
                      const Eigen::VectorXd& p) {
  const double fg_h = jacobi_bracket(s, f * g, h, p);
  return fg_h - f(p) * jacobi_bracket(s, g, h, p) - g(p) * jacobi_bracket(s, f, h, p);
}

double jacobi_identity_residual(const JacobiStructure& s, const ScalarField& f, const ScalarField& g,
                                const ScalarField& h, const Eigen::VectorXd& p) {
  const double a = jacobi_bracket(s, f, bracket_field(s, g, h), p);
  const double b = jacobi_bracket(s, g, bracket_field(s, h, f), p);
  const double c = jacobi_bracket(s, h, bracket_field(s, f, g), p);
  return std::abs(a + b + c);
}

}  // namespace darboux
