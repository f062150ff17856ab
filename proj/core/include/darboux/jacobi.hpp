#pragma once

// Jacobi structures (Lambda, E) and the bracket
//
//   {f, g} = Lambda(df, dg) + f E(g) - g E(f).
//
// Three instantiations:
//   contact       Lambda(a, b) = -d eta(#a, #b), E = -R
//   cosymplectic  Omega = dx^i ^ dy_i, eta = dz, Lambda(a, b) = Omega(#a, #b), E = 0
//   lcs           Omega, Lee form gamma on R^{2n}; flat(X) = iota_X Omega,
//                 Lambda(a, b) = Omega(#a, #b), E = #gamma
//
// Lambda and E are evaluated generically (double or nested duals) so that
// brackets can be composed into new fields and differentiated again.

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "darboux/chart.hpp"
#include "darboux/field.hpp"
#include "darboux/linalg.hpp"

namespace darboux {

/// A 2-form with expression coefficients; entries row-major, antisymmetric.
struct TwoFormExpr {
  int dim = 0;
  std::vector<ScalarField> entries;

  /// Builds the antisymmetric form from its (i < j) coefficients; unlisted
  /// pairs are zero.
  static TwoFormExpr from_pairs(int dim, const std::vector<std::tuple<int, int, ScalarField>>& pairs);

  template <class T>
  std::vector<T> eval(std::span<const T> p) const {
    std::vector<T> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.eval(p));
    return out;
  }
};

class JacobiStructure {
 public:
  enum class Kind { Contact, Cosymplectic, Lcs };

  static JacobiStructure contact(const DarbouxChart& chart);
  static JacobiStructure cosymplectic(const DarbouxChart& chart);
  /// Locally conformally symplectic structure on R^dim (dim even).
  static JacobiStructure lcs(TwoFormExpr omega, VectorFieldExpr lee_form);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::string name() const;

  /// Row-major dim*dim matrix Lambda^{ab} = Lambda(e^a, e^b).
  template <class T>
  std::vector<T> lambda_matrix(std::span<const T> p) const {
    const auto d = static_cast<std::size_t>(dim_);
    std::vector<T> w = two_form(p);
    std::vector<T> s = linalg::inverse(flat_matrix(p), d);
    // Lambda = sign * S^T W S with S = flat^{-1}.
    std::vector<T> ws(d * d, T(0.0));
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) {
        T acc(0.0);
        for (std::size_t k = 0; k < d; ++k) acc = acc + w[r * d + k] * s[k * d + c];
        ws[r * d + c] = acc;
      }
    std::vector<T> out(d * d, T(0.0));
    const double sign = kind_ == Kind::Contact ? -1.0 : 1.0;
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) {
        T acc(0.0);
        for (std::size_t k = 0; k < d; ++k) acc = acc + s[k * d + r] * ws[k * d + c];
        out[r * d + c] = sign * acc;
      }
    return out;
  }

  template <class T>
  std::vector<T> e_field(std::span<const T> p) const {
    const auto d = static_cast<std::size_t>(dim_);
    std::vector<T> out(d, T(0.0));
    switch (kind_) {
      case Kind::Contact:
        out[d - 1] = T(-1.0);
        break;
      case Kind::Cosymplectic:
        break;
      case Kind::Lcs:
        out = linalg::solve(flat_matrix(p), lee_->eval(p));
        break;
    }
    return out;
  }

  /// #_Lambda(alpha) = Lambda(alpha, .), generic route through the matrix.
  template <class T>
  std::vector<T> sharp_lambda_generic(std::span<const T> p, std::span<const T> alpha) const {
    const auto d = static_cast<std::size_t>(dim_);
    std::vector<T> l = lambda_matrix(p);
    std::vector<T> out(d, T(0.0));
    for (std::size_t b = 0; b < d; ++b) {
      T acc(0.0);
      for (std::size_t a = 0; a < d; ++a) acc = acc + alpha[a] * l[a * d + b];
      out[b] = acc;
    }
    return out;
  }

  // Numeric interface.
  double lambda(const Eigen::VectorXd& p, const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta) const;
  Eigen::MatrixXd lambda_matrix(const Eigen::VectorXd& p) const;
  Eigen::VectorXd e_field(const Eigen::VectorXd& p) const;
  /// Contact: #(alpha) - alpha(R) R through the chart's flat solve. Other
  /// kinds: Lambda(alpha, .).
  Eigen::VectorXd sharp_lambda(const Eigen::VectorXd& p, const Eigen::VectorXd& alpha) const;

 private:
  JacobiStructure(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  template <class T>
  std::vector<T> flat_matrix(std::span<const T> p) const {
    const auto d = static_cast<std::size_t>(dim_);
    switch (kind_) {
      case Kind::Contact:
        return chart_->flat_matrix_generic(p);
      case Kind::Cosymplectic: {
        std::vector<T> f = two_form(p);
        transpose_in_place(f, d);
        f[d * d - 1] = f[d * d - 1] + 1.0;  // eta (x) eta with eta = dz
        return f;
      }
      case Kind::Lcs: {
        std::vector<T> f = omega_->eval(p);
        transpose_in_place(f, d);
        return f;
      }
    }
    return {};
  }

  template <class T>
  std::vector<T> two_form(std::span<const T> p) const {
    const auto d = static_cast<std::size_t>(dim_);
    if (kind_ == Kind::Lcs) return omega_->eval(p);
    std::vector<T> w(d * d, T(0.0));
    const int n = (dim_ - 1) / 2;
    for (int i = 0; i < n; ++i) {
      w[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(n + i)] = T(1.0);
      w[static_cast<std::size_t>(n + i) * d + static_cast<std::size_t>(i)] = T(-1.0);
    }
    return w;
  }

  template <class T>
  static void transpose_in_place(std::vector<T>& m, std::size_t d) {
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = r + 1; c < d; ++c) std::swap(m[r * d + c], m[c * d + r]);
  }

  Kind kind_;
  int dim_;
  std::shared_ptr<const DarbouxChart> chart_;
  std::shared_ptr<const TwoFormExpr> omega_;
  std::shared_ptr<const VectorFieldExpr> lee_;
};

/// {f, g}(p) on any arithmetic type.
template <class T>
T jacobi_bracket_at(const JacobiStructure& s, const ScalarField& f, const ScalarField& g, std::span<const T> p) {
  const auto d = static_cast<std::size_t>(s.dim());
  std::vector<T> df = gradient(f, p);
  std::vector<T> dg = gradient(g, p);
  std::vector<T> l = s.lambda_matrix(p);
  std::vector<T> e = s.e_field(p);
  T lam(0.0);
  T eg(0.0);
  T ef(0.0);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) lam = lam + df[a] * l[a * d + b] * dg[b];
    eg = eg + e[a] * dg[a];
    ef = ef + e[a] * df[a];
  }
  return lam + f.eval(p) * eg - g.eval(p) * ef;
}

/// X_f = #_Lambda(df) + f E, on any arithmetic type.
template <class T>
std::vector<T> jacobi_hamiltonian_at(const JacobiStructure& s, const ScalarField& f, std::span<const T> p) {
  std::vector<T> df = gradient(f, p);
  std::vector<T> x = s.sharp_lambda_generic(p, std::span<const T>(df));
  std::vector<T> e = s.e_field(p);
  T fv = f.eval(p);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = x[i] + fv * e[i];
  return x;
}

double jacobi_bracket(const JacobiStructure& s, const ScalarField& f, const ScalarField& g, const Eigen::VectorXd& p);

/// {f, g} as a field, so brackets can be nested.
ScalarField bracket_field(const JacobiStructure& s, const ScalarField& f, const ScalarField& g);

/// {fg, h} - f{g, h} - g{f, h}; identically -f g E(h).
double leibniz_defect(const JacobiStructure& s, const ScalarField& f, const ScalarField& g, const ScalarField& h,
                      const Eigen::VectorXd& p);

/// |{f,{g,h}} + {g,{h,f}} + {h,{f,g}}| at p.
double jacobi_identity_residual(const JacobiStructure& s, const ScalarField& f, const ScalarField& g,
                                const ScalarField& h, const Eigen::VectorXd& p);

}  // namespace darboux
