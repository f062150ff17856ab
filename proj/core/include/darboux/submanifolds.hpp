#pragma once

// Distributions and submanifolds of the Darboux chart: contact complements,
// point classification, isotropic / Legendrian / coisotropic tests,
// characteristic distributions and coisotropic reduction onto a declared
// quotient chart.
//
// Subspaces are matrices whose columns span them.

#include <Eigen/Dense>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "darboux/chart.hpp"
#include "darboux/field.hpp"

namespace darboux {

enum class PointClass { Horizontal, Vertical, Oblique };

std::string to_string(PointClass c);

/// #_Lambda(alpha) = #(alpha) - alpha(R) R.
Eigen::VectorXd contact_sharp_lambda(const DarbouxChart& chart, const Point& p, const Eigen::VectorXd& alpha);

/// Ambient Newton draws on a level set.
struct SampleSet {
  std::vector<Point> points;
  std::size_t rejected = 0;
};

/// N = {phi_1 = ... = phi_k = 0}.
class LevelSetSubmanifold {
 public:
  LevelSetSubmanifold(DarbouxChart chart, std::vector<ScalarField> constraints);

  const DarbouxChart& chart() const { return chart_; }
  const std::vector<ScalarField>& constraints() const { return constraints_; }
  int codim() const { return static_cast<int>(constraints_.size()); }
  int dim() const { return chart_.dim() - codim(); }

  Eigen::VectorXd values(const Point& p) const;
  /// Rows are d phi_a.
  Eigen::MatrixXd constraint_jacobian(const Point& p) const;
  bool is_regular(const Point& p) const;
  Eigen::MatrixXd tangent_basis(const Point& p) const;

  /// Minimum-norm Newton projection onto N; nullopt when it fails to reach
  /// max |phi| <= tol within max_iter steps.
  std::optional<Point> project(const Point& start, int max_iter = 50, double tol = 1e-12) const;

  /// Uniform draws from [-radius, radius]^dim projected onto N.
  SampleSet sample(std::mt19937_64& rng, std::size_t count, double radius = 1.0) const;

 private:
  DarbouxChart chart_;
  std::vector<ScalarField> constraints_;
};

/// psi: R^k -> chart, componentwise fields over the k parameters.
class ParamSubmanifold {
 public:
  ParamSubmanifold(DarbouxChart chart, int k, std::vector<ScalarField> psi);

  const DarbouxChart& chart() const { return chart_; }
  int k() const { return k_; }
  const std::vector<ScalarField>& components() const { return psi_; }

  Point point(const Eigen::VectorXd& params) const;
  /// dim x k Jacobian; throws RankError when its rank is below k.
  Eigen::MatrixXd tangent(const Eigen::VectorXd& params) const;
  /// dim x k Jacobian without the rank check.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& params) const;

  /// Freezes parameter `slot` at `value`, leaving k - 1 parameters.
  ParamSubmanifold fix_parameter(int slot, double value) const;

 private:
  DarbouxChart chart_;
  int k_;
  std::vector<ScalarField> psi_;
};

/// Basis of #_Lambda(ann Delta_p). Throws RankError on a dependent basis.
Eigen::MatrixXd contact_complement(const DarbouxChart& chart, const Point& p, const Eigen::MatrixXd& basis);

/// (perp_{d eta} Delta_p) cap H_p, computed as a nullspace.
Eigen::MatrixXd deta_complement_horizontal(const DarbouxChart& chart, const Point& p, const Eigen::MatrixXd& basis);

/// 2n - k when Delta_p is horizontal, 2n + 1 - k otherwise.
int expected_complement_dim(const DarbouxChart& chart, const Point& p, const Eigen::MatrixXd& basis);

PointClass classify_point(const DarbouxChart& chart, const Point& p, const Eigen::MatrixXd& basis);

struct IsotropyReport {
  double max_eta = 0.0;  // max |eta(d psi e_j)|
  std::size_t samples = 0;
  int k = 0;
  int n = 0;
  bool isotropic = false;
  bool legendrian = false;
};

IsotropyReport is_isotropic(const ParamSubmanifold& l, const std::vector<Eigen::VectorXd>& params, double tol = 1e-9);
/// Same report; `legendrian` additionally requires k = n.
IsotropyReport is_legendrian(const ParamSubmanifold& l, const std::vector<Eigen::VectorXd>& params,
                             double tol = 1e-9);

struct CoisotropyReport {
  double max_residual = 0.0;        // max |Z_a(phi_b)|, Z_a = #_Lambda(d phi_a)
  double max_frame_residual = 0.0;  // max |A_i(phi_a) B^i(phi_b) - B^i(phi_a) A_i(phi_b)|
  double frame_disagreement = 0.0;  // max |Z_a(phi_b) + frame value| (the two differ by sign)
  std::size_t samples = 0;
  std::size_t rejected = 0;
  bool coisotropic = false;
};

/// Projects each ambient start onto N and evaluates the coisotropy pairing.
/// Throws RankError if the constraint Jacobian is singular at a sample.
CoisotropyReport is_coisotropic(const LevelSetSubmanifold& n, const std::vector<Point>& starts, double tol = 1e-9);

/// Basis of ker(eta|TN) cap ker(d eta|TN) at p (p is projected first).
Eigen::MatrixXd characteristic_distribution(const LevelSetSubmanifold& n, const Point& p);

/// Columns Z_a(p) = #_Lambda(d phi_a)(p).
Eigen::MatrixXd constraint_hamiltonian_span(const LevelSetSubmanifold& n, const Point& p);

/// Max over pairs of the distance of [Z_a, Z_b](p) to the characteristic span.
double characteristic_involutivity_residual(const LevelSetSubmanifold& n, const Point& p);

/// A declared projection from the ambient chart onto a quotient Darboux chart.
struct QuotientProjection {
  DarbouxChart quotient;
  std::vector<ScalarField> components;  // quotient.dim() fields over the ambient chart

  /// Keeps the listed ambient slots in the given order.
  static QuotientProjection coordinate(const DarbouxChart& ambient, const DarbouxChart& quotient,
                                       const std::vector<int>& keep);

  Point operator()(const Point& p) const;
  Eigen::MatrixXd differential(const Point& p) const;
};

struct ReductionReport {
  double pullback_residual = 0.0;      // max |eta~(D pi v) - eta(v)|, v in TN
  double section_disagreement = 0.0;   // max |eta(w)| for w in TN with D pi w = 0
  double leaf_drift = 0.0;             // max |D pi v| for v characteristic
  double min_abs_det_flat = 0.0;       // min |det flat~| over samples
  double reeb_residual = 0.0;          // max |D pi R - R~| at vertical points
  std::size_t vertical_samples = 0;
  std::size_t samples = 0;
  std::size_t rejected = 0;
  bool passed = false;
};

/// Throws ReductionError(LeafMismatch) when the projection is not constant
/// on characteristic leaves, ReductionError(HorizontalPoint) at a sample
/// where TN is horizontal.
ReductionReport verify_coisotropic_reduction(const LevelSetSubmanifold& n, const QuotientProjection& pi,
                                             const std::vector<Point>& starts, double tol = 1e-9);

/// pi o psi as a parametrized submanifold of the quotient chart. Its
/// Jacobian may be rank-deficient when psi runs along leaves.
ParamSubmanifold project(const ParamSubmanifold& l, const QuotientProjection& pi);

struct LegendrianProjectionReport {
  double max_constraint = 0.0;   // max |phi(psi)|: L lies in N
  double max_eta = 0.0;          // L isotropic upstairs
  double max_eta_reduced = 0.0;  // pi(L) isotropic in the quotient
  int image_rank = 0;            // dimension of pi(L), minimum over samples
  std::size_t samples = 0;
  bool legendrian = false;       // L Legendrian and pi(L) Legendrian
};

/// For a Legendrian L inside N, checks that pi(L) is Legendrian in the
/// quotient chart, working with the image tangent spaces D pi (T L).
LegendrianProjectionReport verify_legendrian_projection(const ParamSubmanifold& l, const LevelSetSubmanifold& n,
                                                        const QuotientProjection& pi,
                                                        const std::vector<Eigen::VectorXd>& params,
                                                        double tol = 1e-9);

}  // namespace darboux
