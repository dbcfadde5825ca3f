#pragma once

#include <cmath>

namespace geomom {

/// Second-order forward-mode jet: value with first and second derivative
/// along a single scalar parameter. Used to differentiate the Legendre
/// recurrence exactly without finite differences.
struct Jet2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  constexpr Jet2() = default;
  constexpr Jet2(double value) : v(value) {}  // NOLINT: implicit constant lift
  constexpr Jet2(double value, double first, double second)
      : v(value), d1(first), d2(second) {}

  static constexpr Jet2 variable(double x) { return {x, 1.0, 0.0}; }

  constexpr Jet2& operator+=(const Jet2& o) {
    v += o.v; d1 += o.d1; d2 += o.d2;
    return *this;
  }
  constexpr Jet2& operator-=(const Jet2& o) {
    v -= o.v; d1 -= o.d1; d2 -= o.d2;
    return *this;
  }
  constexpr Jet2& operator*=(const Jet2& o) {
    *this = Jet2{v * o.v, d1 * o.v + v * o.d1, d2 * o.v + 2.0 * d1 * o.d1 + v * o.d2};
    return *this;
  }
  constexpr Jet2& operator*=(double s) {
    v *= s; d1 *= s; d2 *= s;
    return *this;
  }
  constexpr Jet2& operator/=(double s) {
    v /= s; d1 /= s; d2 /= s;
    return *this;
  }
};

constexpr Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
constexpr Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
constexpr Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }
constexpr Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
constexpr Jet2 operator*(Jet2 a, double s) { return a *= s; }
constexpr Jet2 operator*(double s, Jet2 a) { return a *= s; }
constexpr Jet2 operator/(Jet2 a, double s) { return a /= s; }

inline Jet2 cos(const Jet2& x) {
  const double c = std::cos(x.v), s = std::sin(x.v);
  return {c, -s * x.d1, -c * x.d1 * x.d1 - s * x.d2};
}

inline Jet2 sin(const Jet2& x) {
  const double c = std::cos(x.v), s = std::sin(x.v);
  return {s, c * x.d1, -s * x.d1 * x.d1 + c * x.d2};
}

inline Jet2 tanh(const Jet2& x) {
  const double t = std::tanh(x.v);
  const double dt = 1.0 - t * t;
  return {t, dt * x.d1, -2.0 * t * dt * x.d1 * x.d1 + dt * x.d2};
}

// sech is evaluated directly rather than as sqrt(1 - tanh^2) so that the
// tails keep full relative precision.
inline Jet2 sech(const Jet2& x) {
  const double s = 1.0 / std::cosh(x.v);
  const double t = std::tanh(x.v);
  return {s, -s * t * x.d1, s * (t * t - s * s) * x.d1 * x.d1 - s * t * x.d2};
}

}  // namespace geomom
