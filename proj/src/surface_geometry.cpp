#include "geomom/surface_geometry.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>

#include "geomom/error.hpp"

namespace geomom {
namespace {

constexpr double kPi = std::numbers::pi;

ChartPartials finite_difference_partials(const SurfaceChart::Map& map, const ChartDomain& dom,
                                         double q1, double q2) {
  const double h1 = 1e-5 * dom.span1();
  const double h2 = 1e-5 * dom.span2();
  ChartPartials p;
  p.r = map(q1, q2);
  const Vec3 rp1 = map(q1 + h1, q2), rm1 = map(q1 - h1, q2);
  const Vec3 rp2 = map(q1, q2 + h2), rm2 = map(q1, q2 - h2);
  p.r1 = (rp1 - rm1) / (2.0 * h1);
  p.r2 = (rp2 - rm2) / (2.0 * h2);
  p.r11 = (rp1 - 2.0 * p.r + rm1) / (h1 * h1);
  p.r22 = (rp2 - 2.0 * p.r + rm2) / (h2 * h2);
  p.r12 = (map(q1 + h1, q2 + h2) - map(q1 + h1, q2 - h2) - map(q1 - h1, q2 + h2) +
           map(q1 - h1, q2 - h2)) /
          (4.0 * h1 * h2);
  return p;
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw NumericalError(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
}

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw NumericalError(ErrorCode::InvalidArgument, "not a number: '" + std::string(text) + "'");
  return value;
}

}  // namespace

SurfaceChart SurfaceChart::sphere(double radius) {
  require_positive(radius, "sphere radius");
  auto fn = [radius](double th, double ph) {
    const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    ChartPartials p;
    p.r = radius * Vec3(st * cp, st * sp, ct);
    p.r1 = radius * Vec3(ct * cp, ct * sp, -st);
    p.r2 = radius * Vec3(-st * sp, st * cp, 0.0);
    p.r11 = -p.r;
    p.r12 = radius * Vec3(-ct * sp, ct * cp, 0.0);
    p.r22 = radius * Vec3(-st * cp, -st * sp, 0.0);
    p.alpha = Mat2::Identity() / radius;
    return p;
  };
  return SurfaceChart("sphere", fn, {0.0, kPi, 0.0, 2.0 * kPi}, true);
}

SurfaceChart SurfaceChart::cylinder(double radius) {
  require_positive(radius, "cylinder radius");
  auto fn = [radius](double ph, double z) {
    const double sp = std::sin(ph), cp = std::cos(ph);
    ChartPartials p;
    p.r = Vec3(radius * cp, radius * sp, z);
    p.r1 = Vec3(-radius * sp, radius * cp, 0.0);
    p.r2 = Vec3(0.0, 0.0, 1.0);
    p.r11 = Vec3(-radius * cp, -radius * sp, 0.0);
    p.r12 = Vec3::Zero();
    p.r22 = Vec3::Zero();
    p.alpha = Mat2{{1.0 / radius, 0.0}, {0.0, 0.0}};
    return p;
  };
  return SurfaceChart("cylinder", fn, {0.0, 2.0 * kPi, -1.0, 1.0}, true);
}

SurfaceChart SurfaceChart::torus(double major_radius, double minor_radius) {
  require_positive(major_radius, "torus R");
  require_positive(minor_radius, "torus a");
  if (minor_radius >= major_radius)
    throw NumericalError(ErrorCode::InvalidArgument, "torus needs a < R");
  const double R = major_radius, a = minor_radius;
  auto fn = [R, a](double u, double v) {
    const double su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
    const double w = R + a * cv;
    ChartPartials p;
    p.r = Vec3(w * cu, w * su, a * sv);
    p.r1 = Vec3(-w * su, w * cu, 0.0);
    p.r2 = Vec3(-a * sv * cu, -a * sv * su, a * cv);
    p.r11 = Vec3(-w * cu, -w * su, 0.0);
    p.r12 = Vec3(a * sv * su, -a * sv * cu, 0.0);
    p.r22 = Vec3(-a * cv * cu, -a * cv * su, -a * sv);
    p.alpha = Mat2{{cv / w, 0.0}, {0.0, 1.0 / a}};
    return p;
  };
  return SurfaceChart("torus", fn, {0.0, 2.0 * kPi, 0.0, 2.0 * kPi}, true);
}

SurfaceChart SurfaceChart::plane() {
  auto fn = [](double x, double y) {
    ChartPartials p;
    p.r = Vec3(x, y, 0.0);
    p.r1 = Vec3::UnitX();
    p.r2 = Vec3::UnitY();
    p.r11 = p.r12 = p.r22 = Vec3::Zero();
    p.alpha = Mat2::Zero();
    return p;
  };
  return SurfaceChart("plane", fn, {-1.0, 1.0, -1.0, 1.0}, true);
}

SurfaceChart SurfaceChart::from_map(std::string name, Map map, ChartDomain domain) {
  auto fn = [map = std::move(map), domain](double q1, double q2) {
    return finite_difference_partials(map, domain, q1, q2);
  };
  return SurfaceChart(std::move(name), fn, domain, false);
}

SurfaceChart SurfaceChart::from_partials(std::string name, PartialsFn partials, ChartDomain domain) {
  return SurfaceChart(std::move(name), std::move(partials), domain, true);
}

SurfaceChart parse_surface(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  std::map<std::string, double, std::less<>> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos)
        throw NumericalError(ErrorCode::InvalidArgument,
                             "surface parameter needs key=value: '" + std::string(item) + "'");
      params.emplace(std::string(item.substr(0, eq)), parse_number(item.substr(eq + 1)));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  }
  auto take = [&](const char* key) {
    const auto it = params.find(key);
    if (it == params.end())
      throw NumericalError(ErrorCode::InvalidArgument,
                           std::string(kind) + " needs parameter '" + key + "'");
    const double v = it->second;
    params.erase(it);
    return v;
  };
  auto finish = [&](SurfaceChart chart) {
    if (!params.empty())
      throw NumericalError(ErrorCode::InvalidArgument,
                           "unknown surface parameter '" + params.begin()->first + "'");
    return chart;
  };
  if (kind == "sphere") return finish(SurfaceChart::sphere(take("r")));
  if (kind == "cylinder") return finish(SurfaceChart::cylinder(take("R")));
  if (kind == "torus") {
    const double R = take("R");
    const double a = take("a");
    return finish(SurfaceChart::torus(R, a));
  }
  if (kind == "plane") return finish(SurfaceChart::plane());
  throw NumericalError(ErrorCode::InvalidArgument, "unknown surface '" + std::string(kind) + "'");
}

SurfaceGeometry geometry_at(const SurfaceChart& chart, double q1, double q2, double tol_g) {
  const ChartPartials p = chart.partials(q1, q2);
  SurfaceGeometry geo;
  geo.g << p.r1.dot(p.r1), p.r1.dot(p.r2), p.r2.dot(p.r1), p.r2.dot(p.r2);
  const double det = geo.g.determinant();
  if (!(det > tol_g))
    throw NumericalError(ErrorCode::DegenerateChart,
                         "det g = " + std::to_string(det) + " at a coordinate singularity of " +
                             chart.name());
  geo.n = p.r1.cross(p.r2).normalized();
  if (p.alpha) {
    geo.alpha = *p.alpha;
  } else {
    Mat2 b;
    b << geo.n.dot(p.r11), geo.n.dot(p.r12), geo.n.dot(p.r12), geo.n.dot(p.r22);
    // ∂_μ n · ∂_λ r = -b_μλ, hence alpha g = -b.
    geo.alpha = -b * geo.g.inverse();
  }
  geo.mean_curvature = -0.5 * geo.alpha.trace();
  geo.gaussian_curvature = geo.alpha.determinant();
  return geo;
}

double geometric_potential(double mean_curvature, double gaussian_curvature, double mass,
                           double hbar) {
  return -hbar * hbar / (2.0 * mass) * laplacian_limit_coefficient(mean_curvature, gaussian_curvature);
}

double laplacian_limit_coefficient(double mean_curvature, double gaussian_curvature) {
  return mean_curvature * mean_curvature - gaussian_curvature;
}

double shell_metric_determinant(const SurfaceGeometry& geo, double q3) {
  const double f = 1.0 - 2.0 * geo.mean_curvature * q3 + geo.gaussian_curvature * q3 * q3;
  return geo.det_g() * f * f;
}

ShellMetric shell_metric(const SurfaceChart& chart, double q1, double q2, double q3) {
  const SurfaceGeometry geo = geometry_at(chart, q1, q2);
  const double fold = 1.0 - 2.0 * geo.mean_curvature * q3 + geo.gaussian_curvature * q3 * q3;
  if (!(fold > 0.0))
    throw NumericalError(ErrorCode::ShellFold,
                         "1 - 2Mq3 + Kq3^2 = " + std::to_string(fold) + " <= 0; shell folds over");
  const Mat2 ag = geo.alpha * geo.g;
  const Mat2 upper = geo.g + (ag + ag.transpose()) * q3 + geo.alpha * geo.g * geo.alpha.transpose() * (q3 * q3);
  ShellMetric out;
  out.G = Mat3::Zero();
  out.G.topLeftCorner<2, 2>() = upper;
  out.G(2, 2) = 1.0;
  out.det_G = out.G.determinant();
  return out;
}

Vec3 unit_normal(const SurfaceChart& chart, double q1, double q2) {
  const ChartPartials p = chart.partials(q1, q2);
  return p.r1.cross(p.r2).normalized();
}

Mat3 shell_metric_finite_difference(const SurfaceChart& chart, double q1, double q2, double q3,
                                    double h) {
  auto R = [&](double a, double b) { return Vec3(chart.point(a, b) + q3 * unit_normal(chart, a, b)); };
  const Vec3 d1 = (R(q1 + h, q2) - R(q1 - h, q2)) / (2.0 * h);
  const Vec3 d2 = (R(q1, q2 + h) - R(q1, q2 - h)) / (2.0 * h);
  const Vec3 d3 = unit_normal(chart, q1, q2);
  Mat3 J;
  J.col(0) = d1;
  J.col(1) = d2;
  J.col(2) = d3;
  return J.transpose() * J;
}

double normal_divergence(const SurfaceChart& chart, double q1, double q2) {
  const ChartPartials p = chart.partials(q1, q2);
  Mat2 g;
  g << p.r1.dot(p.r1), p.r1.dot(p.r2), p.r2.dot(p.r1), p.r2.dot(p.r2);
  if (!(g.determinant() > 1e-12))
    throw NumericalError(ErrorCode::DegenerateChart, "det g vanishes on " + chart.name());
  const Mat2 ginv = g.inverse();
  const double h1 = 1e-4 * chart.domain().span1();
  const double h2 = 1e-4 * chart.domain().span2();
  const Vec3 dn1 = (unit_normal(chart, q1 + h1, q2) - unit_normal(chart, q1 - h1, q2)) / (2.0 * h1);
  const Vec3 dn2 = (unit_normal(chart, q1, q2 + h2) - unit_normal(chart, q1, q2 - h2)) / (2.0 * h2);
  // Dual tangents r^μ = g^{μν} ∂_ν r.
  const Vec3 dual1 = ginv(0, 0) * p.r1 + ginv(0, 1) * p.r2;
  const Vec3 dual2 = ginv(1, 0) * p.r1 + ginv(1, 1) * p.r2;
  return dual1.dot(dn1) + dual2.dot(dn2);
}

}  // namespace geomom
