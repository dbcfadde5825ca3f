#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace geomom {

using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// Position and partial derivatives of a chart r(q1, q2) at one point.
struct ChartPartials {
  Vec3 r;
  Vec3 r1, r2;         // ∂_1 r, ∂_2 r
  Vec3 r11, r12, r22;  // second partials
  /// Closed-form Weingarten matrix when the chart knows it; otherwise it is
  /// assembled from the fundamental forms.
  std::optional<Mat2> alpha;
};

struct ChartDomain {
  double q1_min, q1_max;
  double q2_min, q2_max;

  double span1() const { return q1_max - q1_min; }
  double span2() const { return q2_max - q2_min; }
};

/// A parametrized surface in R^3. Built-ins carry closed-form partials;
/// user charts built with from_map() get second-order central differences
/// with step 1e-5 times the domain span in each coordinate.
///
/// Orientation: the unit normal is ∂_1 r × ∂_2 r normalized. All built-ins
/// are parametrized so that this normal points outward.
class SurfaceChart {
 public:
  using Map = std::function<Vec3(double, double)>;
  using PartialsFn = std::function<ChartPartials(double, double)>;

  /// (θ, φ) ∈ [0, π] × [0, 2π].
  static SurfaceChart sphere(double radius);
  /// (φ, z) ∈ [0, 2π] × [-1, 1].
  static SurfaceChart cylinder(double radius);
  /// (u, v) ∈ [0, 2π]^2; u toroidal, v poloidal, v = 0 on the outer equator.
  static SurfaceChart torus(double major_radius, double minor_radius);
  /// (x, y) ↦ (x, y, 0) on [-1, 1]^2.
  static SurfaceChart plane();
  static SurfaceChart from_map(std::string name, Map map, ChartDomain domain);
  /// Closed-form partials supplied by the caller.
  static SurfaceChart from_partials(std::string name, PartialsFn partials, ChartDomain domain);

  ChartPartials partials(double q1, double q2) const { return partials_(q1, q2); }
  Vec3 point(double q1, double q2) const { return partials_(q1, q2).r; }
  const ChartDomain& domain() const { return domain_; }
  const std::string& name() const { return name_; }
  bool analytic() const { return analytic_; }

 private:
  SurfaceChart(std::string name, PartialsFn fn, ChartDomain domain, bool analytic)
      : name_(std::move(name)), partials_(std::move(fn)), domain_(domain), analytic_(analytic) {}

  std::string name_;
  PartialsFn partials_;
  ChartDomain domain_;
  bool analytic_;
};

/// Parses the CLI surface grammar: "sphere:r=<v>", "cylinder:R=<v>",
/// "torus:R=<v>,a=<v>", "plane". Throws NumericalError(InvalidArgument).
SurfaceChart parse_surface(std::string_view text);

struct SurfaceGeometry {
  Mat2 g;      // first fundamental form
  Vec3 n;      // unit normal
  Mat2 alpha;  // Weingarten matrix: ∂_μ n = alpha_μ^ν ∂_ν r
  double mean_curvature;      // M = -Tr(alpha)/2
  double gaussian_curvature;  // K = det(alpha)

  double det_g() const { return g.determinant(); }
};

/// Pointwise metric, normal, Weingarten matrix and curvatures.
/// Throws DegenerateChart when det g <= tol_g (e.g. at the sphere poles).
SurfaceGeometry geometry_at(const SurfaceChart& chart, double q1, double q2, double tol_g = 1e-12);

/// V_g = -ħ²/(2μ) (M² - K).
double geometric_potential(double mean_curvature, double gaussian_curvature,
                           double mass = 1.0, double hbar = 1.0);

/// M² - K, the additive term left in the flat Laplacian when a thin shell is
/// squeezed onto the surface. -ħ²/(2μ) times it is the geometric potential.
double laplacian_limit_coefficient(double mean_curvature, double gaussian_curvature);

struct ShellMetric {
  Mat3 G;
  double det_G;
};

/// Metric of R = r + q3 n near the surface assembled from g and alpha:
/// G_μν = g + [alpha g + (alpha g)^T] q3 + (alpha g alpha^T) q3², G_μ3 = 0,
/// G_33 = 1. Throws ShellFold if 1 - 2 M q3 + K q3² <= 0.
ShellMetric shell_metric(const SurfaceChart& chart, double q1, double q2, double q3);

/// det G in closed form: g (1 - 2 M q3 + K q3²)².
double shell_metric_determinant(const SurfaceGeometry& geo, double q3);

/// Independent route: G_ij = ∂_i R · ∂_j R with R = r + q3 n differentiated
/// by central differences (step h in q1, q2).
Mat3 shell_metric_finite_difference(const SurfaceChart& chart, double q1, double q2, double q3,
                                    double h = 1e-5);

/// Unit normal from first partials only.
Vec3 unit_normal(const SurfaceChart& chart, double q1, double q2);

/// Surface divergence of the unit normal, r^μ · ∂_μ n, with ∂_μ n taken by
/// central differences of n along the coordinate curves. Equals -2M.
double normal_divergence(const SurfaceChart& chart, double q1, double q2);

}  // namespace geomom
