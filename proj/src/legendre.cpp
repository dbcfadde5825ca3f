#include "geomom/legendre.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace geomom {

double factorial_ratio(int l, int m) {
  const int am = std::abs(m);
  if (am > l) throw std::invalid_argument("factorial_ratio: |m| > l");
  double ratio = 1.0;
  for (int k = l - am + 1; k <= l + am; ++k) ratio *= k;
  return m >= 0 ? 1.0 / ratio : ratio;
}

double assoc_legendre(int l, int m, double x) {
  if (l < 0 || std::abs(m) > l) throw std::invalid_argument("assoc_legendre: need |m| <= l");
  const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
  return assoc_legendre_signed(l, m, x, s);
}

double spherical_harmonic_norm(int l, int m) {
  return std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * factorial_ratio(l, m));
}

std::complex<double> spherical_harmonic(int l, int m, double theta, double phi) {
  const double p = assoc_legendre_signed(l, m, std::cos(theta), std::sin(theta));
  return spherical_harmonic_norm(l, m) * p * std::polar(1.0, m * phi);
}

Jet2 spherical_harmonic_theta(int l, int m, double theta) {
  const Jet2 t = Jet2::variable(theta);
  return assoc_legendre_signed(l, m, cos(t), sin(t)) * spherical_harmonic_norm(l, m);
}

}  // namespace geomom
