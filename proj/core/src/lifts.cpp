#include "darboux/lifts.hpp"

#include <algorithm>
#include <cmath>

#include "darboux/calculus.hpp"
#include "darboux/linalg.hpp"

namespace darboux {

Eigen::VectorXd ExtendedPoint::flatten() const {
  Eigen::VectorXd e(base.size() + fiber.size() + 1);
  e << base, fiber, t;
  return e;
}

ExtendedPoint ExtendedPoint::unflatten(const DarbouxChart& chart, const Eigen::VectorXd& e) {
  if (e.size() != extended_dim(chart)) throw DimensionError("extended point has the wrong dimension");
  const int d = chart.dim();
  return {e.head(d), e.segment(d, d), e(2 * d)};
}

int extended_dim(const DarbouxChart& chart) { return 2 * chart.dim() + 1; }

void validate(const DarbouxChart& chart, const ExtendedPoint& ep) {
  chart.validate(ep.base);
  if (ep.fiber.size() != chart.dim()) throw DimensionError("fiber has the wrong dimension");
  if (!ep.fiber.allFinite() || !std::isfinite(ep.t)) throw DomainError("extended point is not finite");
}

namespace {

void check_field(const DarbouxChart& chart, const VectorFieldExpr& f) {
  if (f.dim() != chart.dim()) throw DimensionError("field has the wrong number of components");
}

}  // namespace

Eigen::VectorXd vertical_lift_form(const DarbouxChart& chart, const VectorFieldExpr& alpha, const ExtendedPoint& ep) {
  validate(chart, ep);
  check_field(chart, alpha);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(extended_dim(chart));
  out.head(chart.dim()) = alpha(ep.base);
  return out;
}

Eigen::VectorXd complete_lift_form(const DarbouxChart& chart, const VectorFieldExpr& alpha, const ExtendedPoint& ep) {
  validate(chart, ep);
  check_field(chart, alpha);
  const int d = chart.dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(extended_dim(chart));
  out.head(d) = jacobian(alpha, ep.base) * ep.fiber;
  out.segment(d, d) = alpha(ep.base);
  return out;
}

Eigen::VectorXd vertical_lift_vector(const DarbouxChart& chart, const VectorFieldExpr& x, const ExtendedPoint& ep) {
  validate(chart, ep);
  check_field(chart, x);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(extended_dim(chart));
  out.segment(chart.dim(), chart.dim()) = x(ep.base);
  return out;
}

Eigen::VectorXd complete_lift_vector(const DarbouxChart& chart, const VectorFieldExpr& x, const ExtendedPoint& ep) {
  validate(chart, ep);
  check_field(chart, x);
  const int d = chart.dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(extended_dim(chart));
  out.head(d) = x(ep.base);
  out.segment(d, d) = jacobian(x, ep.base) * ep.fiber;
  return out;
}

Eigen::VectorXd extended_contact_form(const DarbouxChart& chart, const ExtendedPoint& ep) {
  validate(chart, ep);
  Eigen::VectorXd e = ep.flatten();
  return to_eigen(extended_form_components(chart, as_span(e)));
}

Eigen::MatrixXd extended_deta(const DarbouxChart& chart, const ExtendedPoint& ep) {
  validate(chart, ep);
  Eigen::VectorXd e = ep.flatten();
  auto jac = jacobian_of<double>([&](std::span<const D1> q) { return extended_form_components(chart, q); },
                                 as_span(e));
  const int m = extended_dim(chart);
  Eigen::MatrixXd w(m, m);
  // jac[J][I] = d_I A_J.
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) w(i, j) = jac[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] -
                                          jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return w;
}

Eigen::MatrixXd extended_flat_matrix(const DarbouxChart& chart, const ExtendedPoint& ep) {
  Eigen::VectorXd a = extended_contact_form(chart, ep);
  return extended_deta(chart, ep).transpose() + a * a.transpose();
}

Eigen::VectorXd extended_reeb(const DarbouxChart& chart) {
  return Eigen::VectorXd::Unit(extended_dim(chart), chart.dim() + chart.z());
}

ImageReport extended_image_residual(const DarbouxChart& chart, const VectorFieldExpr& x, const ScalarField& s,
                                    const std::vector<Point>& samples) {
  check_field(chart, x);
  if (s.dim() != chart.dim()) throw DimensionError("t-component field has the wrong dimension");
  const int d = chart.dim();
  ImageReport out;
  out.legendrian_dim = d;
  out.image_dim = d;
  auto section = [&](std::span<const D1> p) {
    std::vector<D1> e(p.begin(), p.end());
    std::vector<D1> xv = x.eval(p);
    e.insert(e.end(), xv.begin(), xv.end());
    e.push_back(s.eval(p));
    return e;
  };
  for (const auto& p : samples) {
    chart.validate(p);
    auto jac = jacobian_of<double>(section, as_span(p));
    Eigen::MatrixXd cols(extended_dim(chart), d);
    for (int i = 0; i < extended_dim(chart); ++i)
      for (int j = 0; j < d; ++j) cols(i, j) = jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    ExtendedPoint ep{p, x(p), s(p)};
    Eigen::VectorXd eta_bar = extended_contact_form(chart, ep);
    out.max_residual = std::max(out.max_residual, (eta_bar.transpose() * cols).lpNorm<Eigen::Infinity>());
    out.image_dim = std::min(out.image_dim, linalg::rank(cols));
    ++out.samples;
  }
  if (out.samples == 0) out.image_dim = 0;
  return out;
}

ImageReport legendrian_image_residual(const DarbouxChart& chart, const VectorFieldExpr& x,
                                      const std::vector<Point>& samples) {
  check_field(chart, x);
  ScalarField s = -partial(eta_of(chart, x), chart.z());
  return extended_image_residual(chart, x, s, samples);
}

}  // namespace darboux
