#pragma once

#include <cmath>
#include <complex>

#include "geomom/jet.hpp"

namespace geomom {

/// Associated Legendre function P_l^m with the Condon–Shortley phase,
/// 0 <= m <= l, evaluated from cosθ = x and sinθ = s >= 0 by upward
/// recurrence in l. Passing s separately keeps (1 - x^2)^{m/2} exact when
/// the caller already knows sinθ (e.g. sech u on the stripe). T may be
/// double or Jet2.
template <class T>
T assoc_legendre_cs(int l, int m, const T& x, const T& s) {
  T pmm(1.0);
  for (int i = 1; i <= m; ++i) pmm = pmm * s * (-(2.0 * i - 1.0));
  if (l == m) return pmm;
  T pm1 = x * pmm * (2.0 * m + 1.0);
  for (int ll = m + 2; ll <= l; ++ll) {
    T pl = (x * pm1 * (2.0 * ll - 1.0) - pmm * (ll + m - 1.0)) / double(ll - m);
    pmm = pm1;
    pm1 = pl;
  }
  return pm1;
}

/// (l - m)! / (l + m)! for any |m| <= l.
double factorial_ratio(int l, int m);

/// P_l^m(x) for |m| <= l, x in [-1, 1]; negative m via the reflection
/// P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m.
double assoc_legendre(int l, int m, double x);

/// Same as assoc_legendre but with sinθ supplied and arbitrary-sign m.
template <class T>
T assoc_legendre_signed(int l, int m, const T& x, const T& s) {
  if (m >= 0) return assoc_legendre_cs(l, m, x, s);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return assoc_legendre_cs(l, -m, x, s) * (sign * factorial_ratio(l, -m));
}

/// Orthonormalization of Y_lm on the unit sphere:
/// sqrt((2l+1)/(4π) · (l-m)!/(l+m)!).
double spherical_harmonic_norm(int l, int m);

/// Y_lm(θ, φ) with Condon–Shortley phase.
std::complex<double> spherical_harmonic(int l, int m, double theta, double phi);

/// θ-dependent factor of Y_lm with exact first and second θ-derivatives.
Jet2 spherical_harmonic_theta(int l, int m, double theta);

}  // namespace geomom
