#include <doctest.h>

#include <cmath>

#include "geomom/quadrature.hpp"

using namespace geomom;

TEST_CASE("gauss_legendre integrates polynomials up to degree 2n-1 exactly") {
  for (int n : {1, 2, 5, 12, 40}) {
    const QuadratureRule rule = gauss_legendre(n);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], deg);
      const double exact = (deg % 2 == 1) ? 0.0 : 2.0 / (deg + 1.0);
      CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("composite rule on a decaying integrand") {
  // ∫ sech u du over [-40, 40] = 2 (2 atan(e^40) - π/2) ≈ π.
  const QuadratureRule rule = composite_gauss_legendre(-40.0, 40.0, 0.5, 8);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] / std::cosh(rule.nodes[i]);
  CHECK(sum == doctest::Approx(4.0 * std::atan(std::exp(40.0)) - M_PI).epsilon(1e-14));
}

TEST_CASE("trapezoid is exact for linear data") {
  CHECK(trapezoid({0.0, 1.0, 3.0}, {1.0, 2.0, 4.0}) == doctest::Approx(7.5));
  CHECK_THROWS(trapezoid({0.0, 1.0}, {1.0}));
}
