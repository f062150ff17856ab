#include <doctest.h>

#include <cmath>

#include "darboux/calculus.hpp"
#include "darboux/dynamics.hpp"
#include "fields.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace darboux;
using fx::vec;

TEST_SUITE("calculus") {
  TEST_CASE("gradient and hessian examples") {
    DarbouxChart c(1);
    ScalarField z = fx::scalar(c, "z");
    gen::Rng rng(1);
    for (int k = 0; k < 10; ++k) CHECK(gradient(z, gen::point(rng, 3, 4.0)) == vec({0, 0, 1}));

    ScalarField h = fx::scalar(c, "(x1^2 + y1^2)/2 + $g*z", {{"g", 0.1}});
    CHECK(h(vec({1, 1, 0})) == 1.0);
    CHECK((gradient(h, vec({1, 2, 0})) - vec({1, 2, 0.1})).norm() < 1e-15);
    Eigen::MatrixXd hess = hessian(h, vec({1, 2, 0}));
    CHECK((hess - Eigen::Vector3d(1, 1, 0).asDiagonal().toDenseMatrix()).norm() < 1e-15);
    CHECK(fx::scalar(c, "(x1^2 + y1^2)/2 + 0.1*z")(vec({1, 1, 0})) == doctest::Approx(1.0));
  }

  TEST_CASE("derivatives agree with finite differences") {
    gen::Rng rng(2);
    for (int n = 1; n <= 3; ++n) {
      const int d = 2 * n + 1;
      for (int trial = 0; trial < 20; ++trial) {
        ScalarField f = trial % 2 == 0 ? gen::polynomial(rng, d, 4, 6) : gen::transcendental(rng, d);
        Eigen::VectorXd p = gen::point(rng, d);
        Eigen::VectorXd g = gradient(f, p);
        Eigen::VectorXd g_fd = oracle::fd_gradient(gen::as_function(f), p);
        CHECK((g - g_fd).norm() <= 1e-6 * std::max(1.0, g.norm()));
        Eigen::MatrixXd h = hessian(f, p);
        Eigen::MatrixXd h_fd = oracle::fd_jacobian(
            [&](const Eigen::VectorXd& q) { return gradient(f, q); }, p);
        CHECK((h - h_fd).norm() <= 1e-6 * std::max(1.0, h.norm()));
        CHECK((h - h.transpose()).norm() <= 1e-14 * std::max(1.0, h.norm()));
      }
    }
  }

  TEST_CASE("partial derivative fields") {
    DarbouxChart c(1);
    ScalarField f = fx::scalar(c, "x1^3*sin(z) + y1");
    ScalarField fx3 = partial(f, 0);
    Eigen::Vector3d p(0.5, 2.0, 0.3);
    CHECK(fx3(p) == doctest::Approx(3 * 0.25 * std::sin(0.3)));
    CHECK(partial(partial(f, 0), 2)(p) == doctest::Approx(3 * 0.25 * std::cos(0.3)));
  }

  TEST_CASE("frame brackets") {
    DarbouxChart c(1);
    VectorFieldExpr a = fx::field(c, {"1", "0", "y1"});
    VectorFieldExpr b = fx::field(c, {"0", "1", "0"});
    VectorFieldExpr a_minus = fx::field(c, {"1", "0", "-y1"});
    gen::Rng rng(3);
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd p = gen::point(rng, 3, 3.0);
      CHECK((lie_bracket(a, b, p) - vec({0, 0, -1})).norm() < 1e-15);
      CHECK((lie_bracket(a_minus, b, p) - vec({0, 0, 1})).norm() < 1e-15);
    }
  }

  TEST_CASE("elementary brackets") {
    DarbouxChart c(1);
    VectorFieldExpr dx = fx::field(c, {"1", "0", "0"});
    VectorFieldExpr dy = fx::field(c, {"0", "1", "0"});
    CHECK(lie_bracket(dx, dy, vec({0.3, 0.1, 2})).isZero());
    gen::Rng rng(4);
    for (int k = 0; k < 20; ++k) {
      VectorFieldExpr x = fx::random_polynomial_field(rng, 3);
      Eigen::VectorXd p = gen::point(rng, 3);
      CHECK(lie_bracket(x, x, p).norm() < 1e-14);
    }
  }

  TEST_CASE("brackets agree with finite differences") {
    gen::Rng rng(5);
    for (int k = 0; k < 30; ++k) {
      VectorFieldExpr x = fx::random_polynomial_field(rng, 5, 3, 3);
      VectorFieldExpr y = fx::random_polynomial_field(rng, 5, 3, 3);
      Eigen::VectorXd p = gen::point(rng, 5);
      Eigen::VectorXd ours = lie_bracket(x, y, p);
      Eigen::VectorXd ref = oracle::lie_bracket(fx::as_function(x), fx::as_function(y), p);
      CHECK((ours - ref).norm() <= 1e-7 * std::max(1.0, ours.norm()));
    }
  }

  TEST_CASE("bracket is bilinear and satisfies the Jacobi identity") {
    gen::Rng rng(6);
    for (int k = 0; k < 30; ++k) {
      VectorFieldExpr x = fx::random_polynomial_field(rng, 3, 3, 3);
      VectorFieldExpr y = fx::random_polynomial_field(rng, 3, 3, 3);
      VectorFieldExpr w = fx::random_polynomial_field(rng, 3, 3, 3);
      Eigen::VectorXd p = gen::point(rng, 3);
      const double a = rng.uniform(-2, 2);
      VectorFieldExpr ax_plus_w;
      for (int i = 0; i < 3; ++i) ax_plus_w.components.push_back(a * x.components[i] + w.components[i]);
      Eigen::VectorXd lhs = lie_bracket(ax_plus_w, y, p);
      Eigen::VectorXd rhs = a * lie_bracket(x, y, p) + lie_bracket(w, y, p);
      CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, lhs.norm()));

      Eigen::VectorXd jac = lie_bracket(x, lie_bracket_field(y, w), p) + lie_bracket(y, lie_bracket_field(w, x), p) +
                            lie_bracket(w, lie_bracket_field(x, y), p);
      CHECK(jac.norm() <= 1e-8);
    }
  }

  TEST_CASE("tangent-vector overload carries the base point") {
    DarbouxChart c(1);
    VectorFieldExpr a = fx::field(c, {"1", "0", "y1"});
    VectorFieldExpr b = fx::field(c, {"0", "1", "0"});
    TangentVec v = lie_bracket(a, b, vec({1, 2, 3}), c);
    CHECK(v.base == vec({1, 2, 3}));
    CHECK(v.components == vec({0, 0, -1}));
    CHECK_THROWS_AS(lie_bracket(a, b, vec({1, 2}), c), DimensionError);
  }

  TEST_CASE("eta of a field") {
    DarbouxChart c(1);
    VectorFieldExpr x = fx::field(c, {"x1", "z", "y1^2"});
    ScalarField e = eta_of(c, x);
    Eigen::VectorXd p = vec({2, 3, 5});
    CHECK(e(p) == doctest::Approx(9 - 3 * 2));
  }

  TEST_CASE("Lie derivative of eta") {
    DarbouxChart c(1);
    gen::Rng rng(7);
    VectorFieldExpr reeb = fx::field(c, {"0", "0", "1"});
    VectorFieldExpr dx = fx::field(c, {"1", "0", "0"});
    ContactSystem sys(c, fx::scalar(c, "0.7*z"));
    VectorFieldExpr xh = hamiltonian_field(sys);
    for (int k = 0; k < 20; ++k) {
      Point p = gen::point(rng, 3, 3.0);
      CHECK(lie_derivative_form(c, reeb, p).components.norm() < 1e-15);
      CHECK(lie_derivative_form(c, dx, p).components.norm() < 1e-15);
      CHECK((lie_derivative_form(c, xh, p).components + 0.7 * c.eta_at(p).components).norm() < 1e-14);
    }
    VectorFieldExpr ydx = fx::field(c, {"y1", "0", "0"});
    CHECK((lie_derivative_form(c, ydx, vec({0, 1, 0})).components - vec({0, -1, 0})).norm() < 1e-15);
  }

  TEST_CASE("Lie derivative agrees with finite differences") {
    gen::Rng rng(8);
    for (int n = 1; n <= 2; ++n) {
      DarbouxChart c(n);
      for (int k = 0; k < 20; ++k) {
        VectorFieldExpr x = fx::random_polynomial_field(rng, c.dim(), 3, 3);
        Point p = gen::point(rng, c.dim());
        Eigen::VectorXd ours = lie_derivative_form(c, x, p).components;
        Eigen::VectorXd ref = oracle::lie_derivative_eta(n, fx::as_function(x), p);
        CHECK((ours - ref).norm() <= 1e-8 * std::max(1.0, ours.norm()));
      }
    }
  }
}
