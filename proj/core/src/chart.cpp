#include "darboux/chart.hpp"

#include <cmath>

namespace darboux {

Eigen::MatrixXd Frame::vectors() const {
  const Eigen::Index d = reeb.components.size();
  Eigen::MatrixXd m(d, d);
  Eigen::Index col = 0;
  for (const auto& v : a) m.col(col++) = v.components;
  for (const auto& v : b) m.col(col++) = v.components;
  m.col(col) = reeb.components;
  return m;
}

Eigen::MatrixXd Frame::covectors() const {
  const Eigen::Index d = reeb.components.size();
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) m.row(r) = coframe[r].components.transpose();
  return m;
}

DarbouxChart::DarbouxChart(int n) : n_(n) {
  if (n < 1) throw DimensionError("DarbouxChart: n must be >= 1, got " + std::to_string(n));
}

std::vector<std::string> DarbouxChart::variable_names() const {
  std::vector<std::string> names;
  names.reserve(dim());
  for (int i = 1; i <= n_; ++i) names.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n_; ++i) names.push_back("y" + std::to_string(i));
  names.emplace_back("z");
  return names;
}

void DarbouxChart::validate(const Point& p) const {
  if (p.size() != dim())
    throw DimensionError("point has " + std::to_string(p.size()) + " coordinates, chart expects " +
                         std::to_string(dim()));
  if (!p.allFinite()) throw DomainError("point has non-finite coordinates");
}

void DarbouxChart::validate(const TangentVec& v) const {
  validate(v.base);
  if (v.components.size() != dim()) throw DimensionError("tangent vector has wrong number of components");
}

void DarbouxChart::validate(const CotangentVec& a) const {
  validate(a.base);
  if (a.components.size() != dim()) throw DimensionError("covector has wrong number of components");
}

CotangentVec DarbouxChart::eta_at(const Point& p) const {
  validate(p);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim());
  for (int i = 0; i < n_; ++i) c(x(i)) = -p(y(i));
  c(z()) = 1.0;
  return {p, c};
}

Eigen::MatrixXd DarbouxChart::deta_matrix() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < n_; ++i) {
    m(x(i), y(i)) = 1.0;
    m(y(i), x(i)) = -1.0;
  }
  return m;
}

double DarbouxChart::deta(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  if (u.size() != dim() || v.size() != dim()) throw DimensionError("deta: wrong vector length");
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += u(x(i)) * v(y(i)) - u(y(i)) * v(x(i));
  return s;
}

Eigen::MatrixXd DarbouxChart::flat_matrix(const Point& p) const {
  validate(p);
  Eigen::VectorXd eta = eta_at(p).components;
  return deta_matrix().transpose() + eta * eta.transpose();
}

CotangentVec DarbouxChart::flat(const TangentVec& v) const {
  validate(v);
  return {v.base, flat_matrix(v.base) * v.components};
}

TangentVec DarbouxChart::sharp(const Point& p, const CotangentVec& alpha) const {
  validate(alpha);
  Eigen::MatrixXd f = flat_matrix(p);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(f);
  // det(flat) = 1 in Darboux coordinates; a failure here is an internal fault.
  if (!lu.isInvertible()) throw SingularMatrixError("sharp: flat matrix is singular");
  return {p, lu.solve(alpha.components)};
}

TangentVec DarbouxChart::reeb(const Point& p) const {
  validate(p);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(dim());
  r(z()) = 1.0;
  return {p, r};
}

Frame DarbouxChart::frame(const Point& p) const {
  validate(p);
  Frame f;
  for (int i = 0; i < n_; ++i) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(dim());
    a(x(i)) = 1.0;
    a(z()) = p(y(i));
    f.a.push_back({p, a});
    Eigen::VectorXd b = Eigen::VectorXd::Zero(dim());
    b(y(i)) = 1.0;
    f.b.push_back({p, b});
  }
  f.reeb = reeb(p);
  for (int i = 0; i < n_; ++i) f.coframe.push_back({p, Eigen::VectorXd::Unit(dim(), x(i))});
  for (int i = 0; i < n_; ++i) f.coframe.push_back({p, Eigen::VectorXd::Unit(dim(), y(i))});
  f.coframe.push_back(eta_at(p));
  return f;
}

}  // namespace darboux
