#pragma once

// Forward-mode dual numbers.
//
// A Dual<T> carries a value and a single directional derivative. Nesting
// (Dual<Dual<double>>) yields mixed second derivatives, which is how
// Hessians and "derivative of a derivative" quantities (Jacobi brackets of
// brackets, Lie brackets of Hamiltonian fields) are evaluated.

#include <cmath>
#include <type_traits>

namespace darboux {

template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(double c) : v(c), d(0.0) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}

  static constexpr Dual constant(T value) { return Dual(std::move(value), T(0.0)); }
  static constexpr Dual variable(T value) { return Dual(std::move(value), T(1.0)); }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    T inv = T(1.0) / o.v;
    v *= inv;
    d = (d - v * o.d) * inv;
    return *this;
  }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

/// Nesting depth: 0 for double, 1 for Dual<double>, ...
template <class T>
struct dual_depth : std::integral_constant<int, 0> {};
template <class T>
struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

template <class T>
Dual<T> operator+(Dual<T> a, const Dual<T>& b) {
  return a += b;
}
template <class T>
Dual<T> operator-(Dual<T> a, const Dual<T>& b) {
  return a -= b;
}
template <class T>
Dual<T> operator*(Dual<T> a, const Dual<T>& b) {
  return a *= b;
}
template <class T>
Dual<T> operator/(Dual<T> a, const Dual<T>& b) {
  return a /= b;
}
template <class T>
Dual<T> operator-(const Dual<T>& a) {
  return {-a.v, -a.d};
}

template <class T>
Dual<T> operator+(Dual<T> a, double c) {
  a.v += c;
  return a;
}
template <class T>
Dual<T> operator+(double c, Dual<T> a) {
  a.v += c;
  return a;
}
template <class T>
Dual<T> operator-(Dual<T> a, double c) {
  a.v -= c;
  return a;
}
template <class T>
Dual<T> operator-(double c, const Dual<T>& a) {
  return {c - a.v, -a.d};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, double c) {
  return {a.v * c, a.d * c};
}
template <class T>
Dual<T> operator*(double c, const Dual<T>& a) {
  return {a.v * c, a.d * c};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, double c) {
  return {a.v / c, a.d / c};
}
template <class T>
Dual<T> operator/(double c, const Dual<T>& a) {
  T inv = T(1.0) / a.v;
  return {c * inv, -c * a.d * inv * inv};
}

template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return {e, a.d * e};
}
template <class T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.v), a.d / a.v};
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.v), a.d * cos(a.v)};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.v), -(a.d * sin(a.v))};
}
template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}

/// Integer power by repeated multiplication; exact at zero base.
template <class T>
T ipow(const T& base, int k) {
  if (k < 0) return T(1.0) / ipow(base, -k);
  T result(1.0);
  T b = base;
  while (k > 0) {
    if (k & 1) result = result * b;
    b = b * b;
    k >>= 1;
  }
  return result;
}

/// Real power x^c for x > 0 (callers enforce the domain).
inline double rpow(double x, double c) { return std::pow(x, c); }
template <class T>
Dual<T> rpow(const Dual<T>& a, double c) {
  T p = rpow(a.v, c);
  T pm1 = rpow(a.v, c - 1.0);
  return {p, c * pm1 * a.d};
}

}  // namespace darboux
