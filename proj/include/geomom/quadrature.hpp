#pragma once

#include <vector>

namespace geomom {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss–Legendre rule on [-1, 1]; exact for polynomials of degree
/// 2n - 1. Nodes are returned in increasing order.
QuadratureRule gauss_legendre(int n);

/// Gauss–Legendre rule mapped onto [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Composite rule: [a, b] split into equal panels no wider than
/// max_panel_width, each carrying an order-point Gauss–Legendre rule.
QuadratureRule composite_gauss_legendre(double a, double b, double max_panel_width, int order);

/// Composite rule over explicit panel breakpoints (must be increasing).
QuadratureRule composite_gauss_legendre(const std::vector<double>& breakpoints, int order);

/// Trapezoid rule over samples at the given abscissae.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace geomom
