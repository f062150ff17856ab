#pragma once

// Dense linear-algebra helpers shared by the geometry modules.
//
// Subspaces are represented by matrices whose columns span them. All rank
// decisions go through a relative singular-value threshold.

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "darboux/dual.hpp"
#include "darboux/errors.hpp"

namespace darboux::linalg {

inline constexpr double kRankTol = 1e-9;

/// Numerical rank: number of singular values above tol * max(1, sigma_max).
int rank(const Eigen::MatrixXd& a, double tol = kRankTol);

/// Orthonormal basis (columns) of the column space of a.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& a, double tol = kRankTol);

/// Orthonormal basis (columns) of {v : a v = 0}.
Eigen::MatrixXd nullspace(const Eigen::MatrixXd& a, double tol = kRankTol);

/// Sine of the largest principal angle between span(a) and span(b).
/// Returns 1 when the dimensions differ.
double subspace_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol = kRankTol);

/// Norm of the component of v orthogonal to span(a).
double distance_to_span(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, double tol = kRankTol);

/// Throws RankError unless the columns of a are linearly independent.
void require_independent(const Eigen::MatrixXd& a, const char* what);

/// Solves a x = b by Gaussian elimination with partial pivoting on any
/// arithmetic type (double or nested duals). `a` is row-major n*n.
template <class T>
std::vector<T> solve(std::vector<T> a, std::vector<T> b) {
  const std::size_t n = b.size();
  if (a.size() != n * n) throw DimensionError("solve: matrix/vector size mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(value_of(a[col * n + col]));
    for (std::size_t r = col + 1; r < n; ++r) {
      double m = std::abs(value_of(a[r * n + col]));
      if (m > best) {
        best = m;
        piv = r;
      }
    }
    if (best < 1e-300) throw SingularMatrixError("solve: singular matrix");
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      T factor = a[r * n + col] / a[col * n + col];
      for (std::size_t c = col; c < n; ++c) a[r * n + c] = a[r * n + c] - factor * a[col * n + c];
      b[r] = b[r] - factor * b[col];
    }
  }
  std::vector<T> x(n, T(0.0));
  for (std::size_t i = n; i-- > 0;) {
    T acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc = acc - a[i * n + c] * x[c];
    x[i] = acc / a[i * n + i];
  }
  return x;
}

/// Inverse of a row-major n*n matrix by Gauss-Jordan elimination with
/// partial pivoting, on any arithmetic type.
template <class T>
std::vector<T> inverse(std::vector<T> a, std::size_t n) {
  if (a.size() != n * n) throw DimensionError("inverse: matrix is not square");
  std::vector<T> inv(n * n, T(0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = T(1.0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(value_of(a[col * n + col]));
    for (std::size_t r = col + 1; r < n; ++r) {
      double m = std::abs(value_of(a[r * n + col]));
      if (m > best) {
        best = m;
        piv = r;
      }
    }
    if (best < 1e-300) throw SingularMatrixError("inverse: singular matrix");
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a[col * n + c], a[piv * n + c]);
        std::swap(inv[col * n + c], inv[piv * n + c]);
      }
    }
    T pivot = a[col * n + col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col * n + c] = a[col * n + c] / pivot;
      inv[col * n + c] = inv[col * n + c] / pivot;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      T factor = a[r * n + col];
      for (std::size_t c = 0; c < n; ++c) {
        a[r * n + c] = a[r * n + c] - factor * a[col * n + c];
        inv[r * n + c] = inv[r * n + c] - factor * inv[col * n + c];
      }
    }
  }
  return inv;
}

}  // namespace darboux::linalg
