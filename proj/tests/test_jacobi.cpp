#include <doctest.h>

#include <cmath>

#include "darboux/jacobi.hpp"
#include "fields.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace darboux;
using fx::vec;

namespace {

// Reference values computed symbolically at p = (0.3, -0.7, 1.1) for
// f = x^2 y + sin z, g = e^x y - z^2, h = x z + y^3.
constexpr double kBracketFG = 1.8937044795148422168;
constexpr double kBracketFGH = -0.92726322262503845418;
constexpr double kLeibnizFGH = -0.53541150159272272702;
constexpr double kCosymplecticFG = -0.48189959430463310812;
// Omega = e^x dx ^ dy, Lee form dx, f = x y^2 + cos x, g = e^y x at (0.3, -0.7).
constexpr double kLcsFG = 0.0079620115314479445206;

struct Triple {
  DarbouxChart chart{1};
  ScalarField f = fx::scalar(chart, "x1^2*y1 + sin(z)");
  ScalarField g = fx::scalar(chart, "exp(x1)*y1 - z^2");
  ScalarField h = fx::scalar(chart, "x1*z + y1^3");
  Point p = vec({0.3, -0.7, 1.1});
};

JacobiStructure lcs_plane() {
  VariableTable vars = VariableTable::even(1);
  TwoFormExpr omega = TwoFormExpr::from_pairs(2, {{0, 1, parse_field("exp(x1)", vars)}});
  VectorFieldExpr lee{{parse_field("1", vars), parse_field("0", vars)}};
  return JacobiStructure::lcs(omega, lee);
}

JacobiStructure lcs_four() {
  VariableTable vars = VariableTable::even(2);
  ScalarField c = parse_field("exp(-x1)", vars);
  TwoFormExpr omega = TwoFormExpr::from_pairs(4, {{0, 2, c}, {1, 3, c}});
  VectorFieldExpr lee{{parse_field("-1", vars), parse_field("0", vars), parse_field("0", vars), parse_field("0", vars)}};
  return JacobiStructure::lcs(omega, lee);
}

}  // namespace

TEST_SUITE("jacobi") {
  TEST_CASE("contact bracket reference values") {
    Triple t;
    JacobiStructure s = JacobiStructure::contact(t.chart);
    CHECK(std::abs(jacobi_bracket(s, t.f, t.g, t.p) - kBracketFG) < 1e-13);
    CHECK(std::abs(jacobi_bracket(s, bracket_field(s, t.f, t.g), t.h, t.p) - kBracketFGH) < 1e-12);
    CHECK(std::abs(leibniz_defect(s, t.f, t.g, t.h, t.p) - kLeibnizFGH) < 1e-13);
  }

  TEST_CASE("cosymplectic bracket reference value") {
    Triple t;
    JacobiStructure s = JacobiStructure::cosymplectic(t.chart);
    CHECK(std::abs(jacobi_bracket(s, t.f, t.g, t.p) - kCosymplecticFG) < 1e-13);
    CHECK(s.e_field(t.p).isZero());
  }

  TEST_CASE("lcs structure on the plane") {
    JacobiStructure s = lcs_plane();
    VariableTable vars = VariableTable::even(1);
    ScalarField f = parse_field("x1*y1^2 + cos(x1)", vars);
    ScalarField g = parse_field("exp(y1)*x1", vars);
    Eigen::VectorXd p = vec({0.3, -0.7});
    CHECK(std::abs(jacobi_bracket(s, f, g, p) - kLcsFG) < 1e-13);
    const double ex = std::exp(-0.3);
    Eigen::MatrixXd l = s.lambda_matrix(p);
    CHECK(std::abs(l(0, 1) - ex) < 1e-15);
    CHECK(std::abs(l(1, 0) + ex) < 1e-15);
    CHECK((s.e_field(p) - vec({0, -ex})).norm() < 1e-15);
  }

  TEST_CASE("contact sharp_lambda examples") {
    DarbouxChart c(1);
    JacobiStructure s = JacobiStructure::contact(c);
    Point p = vec({0, 3, 0});
    CHECK((s.sharp_lambda(p, vec({0, 1, 0})) - vec({1, 0, 3})).norm() < 1e-14);
    CHECK((s.sharp_lambda(p, vec({1, 0, 0})) - vec({0, -1, 0})).norm() < 1e-14);
    CHECK((s.sharp_lambda(p, vec({0, 0, 1})) - vec({0, -3, 0})).norm() < 1e-14);
    gen::Rng rng(1);
    for (int n = 1; n <= 3; ++n) {
      DarbouxChart cn(n);
      JacobiStructure sn = JacobiStructure::contact(cn);
      for (int k = 0; k < 50; ++k) {
        Point q = gen::point(rng, cn.dim(), 3.0);
        CHECK(sn.sharp_lambda(q, cn.eta_at(q).components).norm() < 1e-14);
        Eigen::VectorXd a = gen::point(rng, cn.dim(), 2.0);
        Eigen::VectorXd v = sn.sharp_lambda(q, a);
        CHECK(std::abs(cn.eta_at(q).components.dot(v)) < 1e-13);
        CHECK((v - oracle::sharp_lambda(n, q, a)).norm() < 1e-13);
      }
    }
  }

  TEST_CASE("contact Lambda: two formulas agree and are antisymmetric") {
    gen::Rng rng(2);
    for (int n = 1; n <= 3; ++n) {
      DarbouxChart c(n);
      JacobiStructure s = JacobiStructure::contact(c);
      for (int k = 0; k < 50; ++k) {
        Point p = gen::point(rng, c.dim(), 3.0);
        Eigen::VectorXd a = gen::point(rng, c.dim(), 2.0);
        Eigen::VectorXd b = gen::point(rng, c.dim(), 2.0);
        const double via_sharp = b.dot(s.sharp_lambda(p, a));
        const double via_deta =
            -c.deta(c.sharp(p, {p, a}).components, c.sharp(p, {p, b}).components);
        CHECK(std::abs(s.lambda(p, a, b) - via_sharp) < 1e-10);
        CHECK(std::abs(via_sharp - via_deta) < 1e-10);
        CHECK(std::abs(s.lambda(p, a, b) + s.lambda(p, b, a)) < 1e-10);
        CHECK((s.e_field(p) + c.reeb(p).components).norm() == 0.0);
      }
    }
  }

  TEST_CASE("coordinate brackets") {
    DarbouxChart c(1);
    JacobiStructure s = JacobiStructure::contact(c);
    ScalarField x = fx::scalar(c, "x1");
    ScalarField y = fx::scalar(c, "y1");
    ScalarField z = fx::scalar(c, "z");
    ScalarField one = fx::scalar(c, "1");
    gen::Rng rng(3);
    for (int k = 0; k < 50; ++k) {
      Point p = gen::point(rng, 3, 5.0);
      CHECK(std::abs(jacobi_bracket(s, x, y, p) + 1.0) < 1e-14);
      CHECK(std::abs(jacobi_bracket(s, one, z, p) + 1.0) < 1e-14);
      CHECK(std::abs(oracle::contact_bracket(1, gen::as_function(x), gen::as_function(y), p) + 1.0) < 1e-10);
      ScalarField g = gen::transcendental(rng, 3);
      CHECK(std::abs(jacobi_bracket(s, one, g, p) + gradient(g, p)(2)) < 1e-12);
    }
  }

  TEST_CASE("contact bracket agrees with the finite-difference oracle") {
    gen::Rng rng(4);
    for (int n = 1; n <= 3; ++n) {
      DarbouxChart c(n);
      JacobiStructure s = JacobiStructure::contact(c);
      for (int k = 0; k < 20; ++k) {
        ScalarField f = gen::transcendental(rng, c.dim());
        ScalarField g = gen::transcendental(rng, c.dim());
        Point p = gen::point(rng, c.dim());
        const double ours = jacobi_bracket(s, f, g, p);
        const double ref = oracle::contact_bracket(n, gen::as_function(f), gen::as_function(g), p);
        CHECK(std::abs(ours - ref) <= 1e-8 * std::max(1.0, std::abs(ours)));
        CHECK(std::abs(ours + jacobi_bracket(s, g, f, p)) < 1e-12 * std::max(1.0, std::abs(ours)));
        CHECK(std::abs(jacobi_bracket(s, f, f, p)) < 1e-14 * std::max(1.0, std::abs(ours)) + 1e-15);
      }
    }
  }

  TEST_CASE("Leibniz defect examples") {
    DarbouxChart c(1);
    JacobiStructure contact = JacobiStructure::contact(c);
    JacobiStructure cosym = JacobiStructure::cosymplectic(c);
    ScalarField one = fx::scalar(c, "1");
    ScalarField zero = fx::scalar(c, "0");
    ScalarField z = fx::scalar(c, "z");
    gen::Rng rng(5);
    for (int k = 0; k < 30; ++k) {
      Point p = gen::point(rng, 3, 2.0);
      CHECK(std::abs(leibniz_defect(contact, one, one, z, p) - 1.0) < 1e-14);
      ScalarField g = gen::transcendental(rng, 3);
      ScalarField h = gen::transcendental(rng, 3);
      CHECK(std::abs(leibniz_defect(contact, zero, g, h, p)) < 1e-14);
      ScalarField f = gen::transcendental(rng, 3);
      CHECK(std::abs(leibniz_defect(cosym, f, g, h, p)) < 1e-12);
      const double expect = f(p) * g(p) * gradient(h, p)(2);  // -f g E(h) with E = -R
      CHECK(std::abs(leibniz_defect(contact, f, g, h, p) - expect) < 1e-10);
    }
  }

  TEST_CASE("Jacobi identity for each structure") {
    gen::Rng rng(6);
    DarbouxChart c(1);
    JacobiStructure contact = JacobiStructure::contact(c);
    ScalarField x = fx::scalar(c, "x1");
    ScalarField y = fx::scalar(c, "y1");
    ScalarField z = fx::scalar(c, "z");
    for (int k = 0; k < 30; ++k) {
      Point p = gen::point(rng, 3, 3.0);
      CHECK(jacobi_identity_residual(contact, x, y, z, p) <= 1e-8);
      ScalarField f = gen::polynomial(rng, 3, 3, 4);
      CHECK(jacobi_identity_residual(contact, f, f, z, p) <= 1e-12);
    }

    DarbouxChart c2(2);
    for (const JacobiStructure& s : {JacobiStructure::contact(c2), JacobiStructure::cosymplectic(c2)}) {
      for (int k = 0; k < 10; ++k) {
        ScalarField f = gen::polynomial(rng, 5, 3, 4);
        ScalarField g = gen::transcendental(rng, 5);
        ScalarField h = gen::polynomial(rng, 5, 2, 3);
        CHECK(jacobi_identity_residual(s, f, g, h, gen::point(rng, 5)) <= 1e-8);
      }
    }
  }

  TEST_CASE("lcs structure on R^4") {
    JacobiStructure s = lcs_four();
    CHECK(s.kind() == JacobiStructure::Kind::Lcs);
    gen::Rng rng(7);
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXd p = gen::point(rng, 4);
      // E is tangent to the kernel of the Lee form.
      CHECK(std::abs(s.e_field(p)(0)) < 1e-14);
      Eigen::MatrixXd l = s.lambda_matrix(p);
      CHECK((l + l.transpose()).norm() < 1e-14);
      if (k < 30) {
        ScalarField f = gen::polynomial(rng, 4, 3, 3);
        ScalarField g = gen::transcendental(rng, 4);
        ScalarField h = gen::polynomial(rng, 4, 2, 3);
        CHECK(jacobi_identity_residual(s, f, g, h, p) <= 1e-8);
      }
    }
  }
}
