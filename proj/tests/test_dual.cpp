#include <doctest.h>

#include <cmath>

#include "darboux/dual.hpp"
#include "darboux/field.hpp"
#include "darboux/parser.hpp"

using namespace darboux;

TEST_SUITE("dual") {
  TEST_CASE("first derivatives of elementary functions") {
    D1 x(0.7, 1.0);
    CHECK(std::abs((x * x).d - 1.4) < 1e-15);
    CHECK(std::abs(exp(x).d - std::exp(0.7)) < 1e-15);
    CHECK(std::abs(log(x).d - 1.0 / 0.7) < 1e-15);
    CHECK(std::abs(sin(x).d - std::cos(0.7)) < 1e-15);
    CHECK(std::abs(cos(x).d + std::sin(0.7)) < 1e-15);
    CHECK(std::abs(sqrt(x).d - 0.5 / std::sqrt(0.7)) < 1e-15);
    CHECK(std::abs((1.0 / x).d + 1.0 / (0.7 * 0.7)) < 1e-15);
  }

  TEST_CASE("nested duals give second and third derivatives") {
    // f(x) = x^3 sin x at x = 0.4
    const double a = 0.4;
    D3 x(D2(D1(a, 1.0), D1(1.0, 0.0)), D2(D1(1.0, 0.0), D1(0.0, 0.0)));
    D3 f = ipow(x, 3) * sin(x);
    const double s = std::sin(a);
    const double c = std::cos(a);
    const double f1 = 3 * a * a * s + a * a * a * c;
    const double f2 = 6 * a * s + 6 * a * a * c - a * a * a * s;
    const double f3 = 6 * s + 18 * a * c - 9 * a * a * s - a * a * a * c;
    CHECK(std::abs(f.v.v.v - a * a * a * s) < 1e-15);
    CHECK(std::abs(f.d.v.v - f1) < 1e-14);
    CHECK(std::abs(f.d.d.v - f2) < 1e-14);
    CHECK(std::abs(f.d.d.d - f3) < 1e-13);
  }

  TEST_CASE("integer and real powers") {
    D1 x(2.0, 1.0);
    CHECK(ipow(x, -2).v == doctest::Approx(0.25));
    CHECK(ipow(x, -2).d == doctest::Approx(-0.25));
    CHECK(ipow(x, 0).d == 0.0);
    CHECK(rpow(x, 1.5).d == doctest::Approx(1.5 * std::sqrt(2.0)));
  }

  TEST_CASE("hessian of a parsed field is symmetric and exact") {
    DarbouxChart chart(1);
    ScalarField f = parse_field("x1^2*y1 + sin(z)*x1 + exp(y1*z)", chart);
    Eigen::Vector3d p(0.3, -0.7, 1.1);
    Eigen::MatrixXd h = hessian(f, p);
    CHECK((h - h.transpose()).norm() < 1e-14);
    CHECK(std::abs(h(0, 0) - 2 * p(1)) < 1e-14);
    CHECK(std::abs(h(0, 2) - std::cos(p(2))) < 1e-14);
    CHECK(std::abs(h(1, 2) - std::exp(p(1) * p(2)) * (1 + p(1) * p(2))) < 1e-14);
  }

  TEST_CASE("native fields refuse a fourth nested level") {
    ScalarField f = ScalarField::from_function(1, "square", [](auto x) { return x[0] * x[0]; });
    using D4 = Dual<D3>;
    std::vector<D4> p{D4(1.0)};
    CHECK_THROWS_AS(f.eval(std::span<const D4>(p)), DomainError);
    std::vector<D3> q{D3(2.0)};
    CHECK(f.eval(std::span<const D3>(q)).v.v.v == 4.0);
  }
}
