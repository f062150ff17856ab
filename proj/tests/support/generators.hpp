#pragma once

// Seeded generators for property tests: points, polynomial and
// transcendental fields, random distributions.

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>

#include "darboux/field.hpp"
#include "oracles.hpp"

namespace gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

inline Eigen::VectorXd point(Rng& rng, int dim, double radius = 1.0) {
  Eigen::VectorXd p(dim);
  for (int i = 0; i < dim; ++i) p(i) = rng.uniform(-radius, radius);
  return p;
}

inline Eigen::MatrixXd matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

/// Sum of `terms` monomials of total degree <= degree with coefficients in [-1, 1].
inline darboux::ScalarField polynomial(Rng& rng, int dim, int degree, int terms) {
  using darboux::ScalarField;
  ScalarField f = ScalarField::constant(dim, rng.uniform(-1.0, 1.0));
  for (int t = 0; t < terms; ++t) {
    ScalarField m = ScalarField::constant(dim, rng.uniform(-1.0, 1.0));
    const int deg = rng.integer(1, degree);
    for (int k = 0; k < deg; ++k) m = m * ScalarField::coordinate(dim, rng.integer(0, dim - 1));
    f = f + m;
  }
  return f;
}

/// Polynomial plus sin, cos and exp terms of random linear forms.
inline darboux::ScalarField transcendental(Rng& rng, int dim) {
  using darboux::ScalarField;
  auto linear = [&] {
    ScalarField l = ScalarField::constant(dim, rng.uniform(-0.5, 0.5));
    for (int i = 0; i < dim; ++i) l = l + rng.uniform(-0.7, 0.7) * ScalarField::coordinate(dim, i);
    return l;
  };
  ScalarField f = polynomial(rng, dim, 2, 3);
  f = f + rng.uniform(-1.0, 1.0) * sin(linear());
  f = f + rng.uniform(-1.0, 1.0) * cos(linear()) * ScalarField::coordinate(dim, rng.integer(0, dim - 1));
  f = f + rng.uniform(-0.5, 0.5) * exp(linear());
  return f;
}

inline oracle::Scalar as_function(const darboux::ScalarField& f) {
  return [f](const Eigen::VectorXd& p) { return f(p); };
}

}  // namespace gen
