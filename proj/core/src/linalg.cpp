#include "darboux/linalg.hpp"

#include <algorithm>

namespace darboux::linalg {

namespace {

double threshold(const Eigen::JacobiSVD<Eigen::MatrixXd>& svd, double tol) {
  const auto& s = svd.singularValues();
  double smax = s.size() > 0 ? s(0) : 0.0;
  return tol * std::max(1.0, smax);
}

}  // namespace

int rank(const Eigen::MatrixXd& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  double thr = threshold(svd, tol);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thr) ++r;
  return r;
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& a, double tol) {
  if (a.cols() == 0) return Eigen::MatrixXd(a.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU);
  double thr = threshold(svd, tol);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thr) ++r;
  return svd.matrixU().leftCols(r);
}

Eigen::MatrixXd nullspace(const Eigen::MatrixXd& a, double tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  double thr = threshold(svd, tol);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thr) ++r;
  return svd.matrixV().rightCols(n - r);
}

double subspace_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol) {
  Eigen::MatrixXd qa = orthonormal_basis(a, tol);
  Eigen::MatrixXd qb = orthonormal_basis(b, tol);
  if (qa.cols() != qb.cols()) return 1.0;
  if (qa.cols() == 0) return 0.0;
  Eigen::MatrixXd resid = qb - qa * (qa.transpose() * qb);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(resid);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

double distance_to_span(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, double tol) {
  Eigen::MatrixXd q = orthonormal_basis(a, tol);
  if (q.cols() == 0) return v.norm();
  return (v - q * (q.transpose() * v)).norm();
}

void require_independent(const Eigen::MatrixXd& a, const char* what) {
  if (rank(a) != a.cols())
    throw RankError(std::string(what) + ": basis vectors are linearly dependent");
}

}  // namespace darboux::linalg
