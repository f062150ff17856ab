#pragma once

// The Darboux model contact manifold R^{2n+1} with eta = dz - y_i dx^i.
//
// Coordinates are ordered (x^1..x^n, y_1..y_n, z). Covectors are always
// stored in the coordinate coframe (dx, dy, dz). The bilinear form of
// d eta is d eta(u, v) = u^T M v with M[x^i, y_i] = +1, M[y_i, x^i] = -1.

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "darboux/errors.hpp"

namespace darboux {

using Point = Eigen::VectorXd;

struct TangentVec {
  Point base;
  Eigen::VectorXd components;
};

struct CotangentVec {
  Point base;
  Eigen::VectorXd components;

  /// alpha(v); bases are not compared.
  double operator()(const TangentVec& v) const { return components.dot(v.components); }
};

/// The canonical frame {A_i, B^i, R} and its dual coframe {dx^i, dy_i, eta}.
struct Frame {
  std::vector<TangentVec> a;  // A_i = d/dx^i + y_i d/dz (horizontal: eta(A_i) = 0)
  std::vector<TangentVec> b;  // B^i = d/dy_i
  TangentVec reeb;
  std::vector<CotangentVec> coframe;  // dx^1..dx^n, dy_1..dy_n, eta

  /// Frame vectors in the order A_1..A_n, B^1..B^n, R as matrix columns.
  Eigen::MatrixXd vectors() const;
  /// Coframe covectors as matrix rows, same order.
  Eigen::MatrixXd covectors() const;
};

class DarbouxChart {
 public:
  explicit DarbouxChart(int n);

  int n() const { return n_; }
  int dim() const { return 2 * n_ + 1; }

  // Slot indices, 0-based pair index i.
  int x(int i) const { return i; }
  int y(int i) const { return n_ + i; }
  int z() const { return 2 * n_; }

  /// Variable names x1..xn, y1..yn, z in slot order.
  std::vector<std::string> variable_names() const;

  /// Throws DimensionError / DomainError on wrong length or non-finite entries.
  void validate(const Point& p) const;
  void validate(const TangentVec& v) const;
  void validate(const CotangentVec& a) const;

  CotangentVec eta_at(const Point& p) const;
  Eigen::MatrixXd deta_matrix() const;
  double deta(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

  /// Matrix F(p) with flat(v) = F(p) v.
  Eigen::MatrixXd flat_matrix(const Point& p) const;
  CotangentVec flat(const TangentVec& v) const;
  TangentVec sharp(const Point& p, const CotangentVec& alpha) const;

  TangentVec reeb(const Point& p) const;
  Frame frame(const Point& p) const;

  /// eta components at a point of any arithmetic type.
  template <class T>
  std::vector<T> eta_components(std::span<const T> p) const {
    std::vector<T> out(static_cast<std::size_t>(dim()), T(0.0));
    for (int i = 0; i < n_; ++i) out[x(i)] = -p[y(i)];
    out[z()] = T(1.0);
    return out;
  }

  /// Row-major flat matrix at a point of any arithmetic type.
  template <class T>
  std::vector<T> flat_matrix_generic(std::span<const T> p) const {
    const auto d = static_cast<std::size_t>(dim());
    std::vector<T> eta = eta_components(p);
    std::vector<T> f(d * d, T(0.0));
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) f[r * d + c] = eta[r] * eta[c];
    // (iota_v d eta)_j = sum_i v^i M_ij, i.e. the transpose of M acting on v.
    for (int i = 0; i < n_; ++i) {
      f[y(i) * d + x(i)] = f[y(i) * d + x(i)] + 1.0;
      f[x(i) * d + y(i)] = f[x(i) * d + y(i)] - 1.0;
    }
    return f;
  }

  bool operator==(const DarbouxChart&) const = default;

 private:
  int n_;
};

}  // namespace darboux
