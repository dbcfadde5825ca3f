#include "geomom/momentum_rep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "geomom/error.hpp"
#include "geomom/legendre.hpp"
#include "geomom/quadrature.hpp"

namespace geomom {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr double kStripeHalfWidth = 40.0;
constexpr int kPanelOrder = 8;

void check_index(int l, int m) {
  if (l < 0 || std::abs(m) > l)
    throw NumericalError(ErrorCode::InvalidArgument,
                         "invalid harmonic index (l=" + std::to_string(l) + ", m=" + std::to_string(m) + ")");
}

// Closed forms written as coeff · r(k) · E(k) with E = sech(πk/2) for even m
// and E = k csch(πk/2) for odd m, so that E is finite at k = 0.
struct ClosedForm {
  cplx coeff;
  std::array<double, 3> poly;  // r(k), ascending powers
  Envelope envelope;
};

ClosedForm closed_form(int l, int m) {
  check_index(l, m);
  const double s = m < 0 ? -1.0 : 1.0;
  switch (l * 10 + std::abs(m)) {
    case 0: return {0.5 * std::sqrt(kPi), {1, 0, 0}, Envelope::sech};
    case 10: return {-0.5 * kI * std::sqrt(3.0 * kPi), {0, 1, 0}, Envelope::sech};
    case 11: return {s * 0.5 * std::sqrt(1.5 * kPi), {1, 0, 0}, Envelope::csch};
    case 20: return {-std::sqrt(5.0 * kPi) / 8.0, {-1, 0, 3}, Envelope::sech};
    case 21: return {s * 0.25 * kI * std::sqrt(7.5 * kPi), {0, 1, 0}, Envelope::csch};
    case 22: return {std::sqrt(7.5 * kPi) / 8.0, {1, 0, 1}, Envelope::sech};
    default: break;
  }
  throw NumericalError(ErrorCode::InvalidArgument, "closed forms exist only for l <= 2");
}

cplx eval_poly(const std::array<double, 3>& c, cplx z) { return c[0] + z * (c[1] + z * c[2]); }

// Distance from z to the nearest pole of the reduced envelope.
double pole_distance(Envelope env, cplx z) {
  const double im = z.imag();
  double nearest;
  if (env == Envelope::sech) {
    nearest = 2.0 * std::round((im - 1.0) / 2.0) + 1.0;  // odd integers
  } else {
    nearest = 2.0 * std::round(im / 2.0);  // even integers, 0 is removable
    if (nearest == 0.0) nearest = im >= 0.0 ? 2.0 : -2.0;
  }
  return std::hypot(z.real(), im - nearest);
}

cplx reduced_envelope(Envelope env, cplx z) {
  if (pole_distance(env, z) < 1e-9)
    throw NumericalError(ErrorCode::PoleHit, "argument within 1e-9 of an envelope pole");
  const cplx x = 0.5 * kPi * z;
  if (env == Envelope::sech) return 1.0 / std::cosh(x);
  if (std::abs(x) < 1e-4) {
    const cplx x2 = x * x;
    return (2.0 / kPi) * (1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0);
  }
  return z / std::sinh(x);
}

double stripe_integrand(int l, int m, double u) {
  const double x = -std::tanh(u);
  const double s = 1.0 / std::cosh(u);
  return normalization_nlm(l, m) * assoc_legendre_signed(l, m, x, s) * s;
}

void check_k(double k) {
  if (std::abs(k) > 50.0) {
    // Cancellation grows like |k|^l e^{π|k|/2} relative to the result.
    const double estimate = 1e-16 * std::exp(0.5 * kPi * std::min(std::abs(k), 700.0));
    char msg[128];
    std::snprintf(msg, sizeof msg, "|k| = %g > 50; estimated relative error %.1e", std::abs(k), estimate);
    throw NumericalError(ErrorCode::AccuracyLoss, msg);
  }
}

}  // namespace

double theta_to_u(double theta) {
  if (!(theta > 0.0 && theta < kPi))
    throw NumericalError(ErrorCode::PoleSingularity, "u = ln tan(θ/2) diverges at the poles");
  return std::log(std::tan(0.5 * theta));
}

double u_to_theta(double u) { return 2.0 * std::atan(std::exp(u)); }

double normalization_nlm(int l, int m) {
  check_index(l, m);
  return std::sqrt((2.0 * l + 1.0) / 2.0 * factorial_ratio(l, m));
}

Jet2 stripe_profile(int l, int m, double u) {
  check_index(l, m);
  const Jet2 t = Jet2::variable(u);
  const Jet2 s = sech(t);
  return assoc_legendre_signed(l, m, -tanh(t), s) * s * normalization_nlm(l, m);
}

cplx stripe_harmonic(int l, int m, double u, double phi) {
  return stripe_integrand(l, m, u) * std::polar(1.0 / std::sqrt(2.0 * kPi), m * phi);
}

double stripe_norm_integral(int l, int m) {
  check_index(l, m);
  const QuadratureRule rule = composite_gauss_legendre(-kStripeHalfWidth, kStripeHalfWidth, 0.5, 16);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double f = stripe_integrand(l, m, rule.nodes[i]);
    sum += rule.weights[i] * f * f;
  }
  return sum;  // the φ factor integrates to 1
}

double l2u_residual(int l, int m, std::span<const double> u_samples) {
  check_index(l, m);
  const double lambda = l * (l + 1.0);
  double worst = 0.0;
  for (double u : u_samples) {
    const Jet2 f = stripe_profile(l, m, u);
    const double t = std::tanh(u);
    const double c2 = std::cosh(u) * std::cosh(u);
    const double bracket = f.d2 + 2.0 * t * f.d1 + (1.0 - double(m * m)) * f.v;
    const double applied = -c2 * bracket;
    const double scale = c2 * (std::abs(f.d2) + std::abs(2.0 * t * f.d1) +
                               std::abs((1.0 - double(m * m)) * f.v)) +
                         lambda * std::abs(f.v);
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(applied - lambda * f.v) / scale);
  }
  return worst;
}

int reflection_parity(int l, int m) { return ((l + m) % 2 == 0) ? 1 : -1; }

Envelope envelope_for(int m) { return (m % 2 == 0) ? Envelope::sech : Envelope::csch; }

cplx q_lm_closed(int l, int m, cplx p, double hbar) {
  const ClosedForm cf = closed_form(l, m);
  const cplx k = p / hbar;
  return cf.coeff * eval_poly(cf.poly, k) * reduced_envelope(cf.envelope, k);
}

cplx q_lm_closed_shifted(int l, int m, double p, int shift_sign, double hbar) {
  const ClosedForm cf = closed_form(l, m);
  const double k = p / hbar;
  const cplx z = k + 2.0 * kI * double(shift_sign > 0 ? 1 : -1);
  if (cf.envelope == Envelope::sech) {
    return cf.coeff * eval_poly(cf.poly, z) * (-1.0 / std::cosh(0.5 * kPi * k));
  }
  if (k == 0.0) throw NumericalError(ErrorCode::PoleHit, "csch pole at k ± 2i with k = 0");
  return cf.coeff * eval_poly(cf.poly, z) * z * (-1.0 / std::sinh(0.5 * kPi * k));
}

cplx phase_alignment(int l, int m) {
  constexpr double k_ref = 1.3;
  const cplx ratio = q_lm_numeric(l, m, k_ref) / q_lm_closed(l, m, k_ref);
  return ratio / std::abs(ratio);
}

double difference_residual(int l, int m, double p, double hbar) {
  const ClosedForm cf = closed_form(l, m);
  const double k = p / hbar;
  const double a = k * k + double(m * m) - 1.0;
  const cplx qk = q_lm_closed(l, m, k);
  const double lhs_coeff = l * (l + 1.0);
  cplx rhs;
  if (cf.envelope == Envelope::sech) {
    rhs = 0.5 * a * qk + 0.25 * (a - 2.0 * kI * k) * q_lm_closed_shifted(l, m, k, -1) +
          0.25 * (a + 2.0 * kI * k) * q_lm_closed_shifted(l, m, k, +1);
  } else {
    // Odd m here means |m| = 1, so A = k² and (A ∓ 2ik) Q(k ∓ 2i) =
    // -(k ∓ 2i)² r(k ∓ 2i) · coeff · k csch(πk/2), finite at k = 0.
    const cplx e = reduced_envelope(Envelope::csch, k);
    auto shifted_term = [&](double sign) {
      const cplx z = k + sign * 2.0 * kI;
      return -cf.coeff * eval_poly(cf.poly, z) * z * z * e;
    };
    rhs = 0.5 * a * qk + 0.25 * shifted_term(-1.0) + 0.25 * shifted_term(+1.0);
  }
  return std::abs(lhs_coeff * qk - rhs);
}

FourierQuadrature::FourierQuadrature(double k_max) : k_max_(std::abs(k_max)) {
  check_k(k_max_);
  double width = 1.0;
  if (k_max_ > 0.0) width = std::min(width, 2.0 * kPi / k_max_);
  const QuadratureRule rule =
      composite_gauss_legendre(-kStripeHalfWidth, kStripeHalfWidth, width / 4.0, kPanelOrder);
  nodes_ = rule.nodes;
  weights_ = rule.weights;
}

Eigen::MatrixXcd FourierQuadrature::amplitudes(std::span<const HarmonicIndex> indices,
                                               std::span<const double> k) const {
  const Eigen::Index n = static_cast<Eigen::Index>(nodes_.size());
  Eigen::MatrixXcd f(static_cast<Eigen::Index>(indices.size()), n);
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * kPi);
  for (std::size_t r = 0; r < indices.size(); ++r)
    for (Eigen::Index j = 0; j < n; ++j)
      f(r, j) = weights_[j] * inv_sqrt_2pi * stripe_integrand(indices[r].l, indices[r].m, nodes_[j]);
  Eigen::MatrixXcd out(f.rows(), static_cast<Eigen::Index>(k.size()));
  Eigen::VectorXcd phase(n);
  for (std::size_t c = 0; c < k.size(); ++c) {
    if (std::abs(k[c]) > k_max_ * (1.0 + 1e-12))
      throw NumericalError(ErrorCode::InvalidArgument, "k outside the quadrature's design range");
    for (Eigen::Index j = 0; j < n; ++j) phase(j) = std::polar(1.0, k[c] * nodes_[j]);
    out.col(static_cast<Eigen::Index>(c)) = f * phase;
  }
  return out;
}

cplx q_lm_numeric(int l, int m, double p, double hbar) {
  check_index(l, m);
  const double k = p / hbar;
  check_k(k);
  const FourierQuadrature quad(k);
  const HarmonicIndex idx{l, m};
  const double ks[] = {k};
  return quad.amplitudes({&idx, 1}, ks)(0, 0);
}

MomentumGrid::MomentumGrid(std::vector<double> k_values) : k_(std::move(k_values)) {
  if (k_.empty()) throw NumericalError(ErrorCode::InvalidArgument, "momentum grid is empty");
  for (std::size_t i = 1; i < k_.size(); ++i)
    if (!(k_[i] > k_[i - 1]))
      throw NumericalError(ErrorCode::InvalidArgument, "momentum grid must be strictly increasing");
  symmetric_ = true;
  for (std::size_t i = 0; i < k_.size(); ++i)
    if (k_[i] != -k_[k_.size() - 1 - i]) symmetric_ = false;
}

MomentumGrid MomentumGrid::symmetric(double k_max, double step) {
  if (!(step > 0.0) || !(k_max > 0.0))
    throw NumericalError(ErrorCode::InvalidArgument, "grid needs positive k_max and step");
  const long n = std::lround(k_max / step);
  if (n < 1 || std::abs(n * step - k_max) > 1e-9 * k_max)
    throw NumericalError(ErrorCode::InvalidArgument, "step must divide k_max");
  std::vector<double> k(2 * n + 1);
  for (long i = 0; i <= n; ++i) {
    const double v = (n - i) == 0 ? 0.0 : double(i - n) * step;
    k[i] = v;
    k[2 * n - i] = -v;
  }
  k[n] = 0.0;
  return MomentumGrid(std::move(k));
}

MomentumGrid MomentumGrid::standard() { return symmetric(20.0, 0.02); }

double MomentumGrid::k_max() const { return std::max(std::abs(k_.front()), std::abs(k_.back())); }

std::string_view to_string(AmplitudeSource source) {
  return source == AmplitudeSource::closed_form ? "closed_form" : "quadrature";
}

double AmplitudeTable::norm() const { return trapezoid(grid.values(), density()); }

std::vector<double> AmplitudeTable::density() const {
  std::vector<double> d(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) d[i] = std::norm(values[i]);
  return d;
}

std::vector<AmplitudeTable> quadrature_tables(std::span<const HarmonicIndex> indices,
                                              const MomentumGrid& grid) {
  for (const HarmonicIndex& idx : indices) check_index(idx.l, idx.m);
  const FourierQuadrature quad(grid.k_max());
  const Eigen::MatrixXcd amps = quad.amplitudes(indices, grid.values());
  std::vector<AmplitudeTable> out;
  out.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    AmplitudeTable t{indices[r], grid, std::vector<cplx>(grid.size()), AmplitudeSource::quadrature};
    for (std::size_t c = 0; c < grid.size(); ++c) t.values[c] = amps(r, c);
    out.push_back(std::move(t));
  }
  return out;
}

AmplitudeTable amplitude_table(HarmonicIndex index, const MomentumGrid& grid, AmplitudeSource source) {
  check_index(index.l, index.m);
  if (source == AmplitudeSource::quadrature) return quadrature_tables({&index, 1}, grid).front();
  AmplitudeTable t{index, grid, std::vector<cplx>(grid.size()), AmplitudeSource::closed_form};
  for (std::size_t c = 0; c < grid.size(); ++c)
    t.values[c] = q_lm_closed(index.l, index.m, grid.values()[c]);
  return t;
}

AmplitudeTable amplitude_table(HarmonicIndex index, const MomentumGrid& grid) {
  return amplitude_table(index, grid, index.l <= 2 ? AmplitudeSource::closed_form : AmplitudeSource::quadrature);
}

std::vector<DistributionPoint> distribution(int l, int m, const MomentumGrid& grid) {
  const AmplitudeTable t = amplitude_table(HarmonicIndex::make(l, m), grid);
  std::vector<DistributionPoint> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = {grid.values()[i], std::norm(t.values[i])};
  return out;
}

Eigen::MatrixXcd orthogonality_matrix(int m, int l_max) {
  if (std::abs(m) > l_max) throw NumericalError(ErrorCode::InvalidArgument, "need |m| <= l_max");
  std::vector<HarmonicIndex> idx;
  for (int l = std::abs(m); l <= l_max; ++l) idx.push_back({l, m});
  const MomentumGrid grid = MomentumGrid::standard();
  const auto tables = quadrature_tables(idx, grid);
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXcd gram(n, n);
  const auto& k = grid.values();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      cplx sum = 0.0;
      for (std::size_t i = 1; i < k.size(); ++i) {
        const cplx lo = std::conj(tables[a].values[i - 1]) * tables[b].values[i - 1];
        const cplx hi = std::conj(tables[a].values[i]) * tables[b].values[i];
        sum += 0.5 * (k[i] - k[i - 1]) * (lo + hi);
      }
      gram(a, b) = sum;
    }
  }
  return gram;
}

int count_nodes(const AmplitudeTable& table) {
  std::size_t peak = 0;
  for (std::size_t i = 1; i < table.values.size(); ++i)
    if (std::abs(table.values[i]) > std::abs(table.values[peak])) peak = i;
  const double vmax = std::abs(table.values[peak]);
  if (vmax == 0.0) return 0;
  const cplx unphase = std::conj(table.values[peak]) / vmax;
  int last_sign = 0, nodes = 0;
  for (const cplx& v : table.values) {
    const double y = (v * unphase).real();
    if (std::abs(y) < 1e-10 * vmax) continue;
    const int sign = y > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++nodes;
    last_sign = sign;
  }
  return nodes;
}

PolynomialFit polynomial_structure(int l, int m) {
  check_index(l, m);
  constexpr double k_span = 4.0;
  const MomentumGrid grid = MomentumGrid::symmetric(k_span, 0.05);
  const HarmonicIndex idx{l, m};
  const AmplitudeTable table = quadrature_tables({&idx, 1}, grid).front();
  const auto& k = grid.values();
  const auto npts = static_cast<Eigen::Index>(k.size());

  std::vector<cplx> data(k.size());
  std::size_t peak = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double x = 0.5 * kPi * k[i];
    data[i] = table.values[i] * (envelope_for(m) == Envelope::sech ? std::cosh(x) : std::sinh(x));
    if (std::abs(data[i]) > std::abs(data[peak])) peak = i;
  }
  const double dmax = std::abs(data[peak]);
  const cplx unphase = std::conj(data[peak]) / dmax;
  Eigen::VectorXd y(npts);
  for (Eigen::Index i = 0; i < npts; ++i) y(i) = (data[i] * unphase).real() / dmax;

  auto fit = [&](int degree, Eigen::VectorXd* coeffs) {
    if (degree < 0) {
      if (coeffs) coeffs->resize(0);
      return y.cwiseAbs().maxCoeff();
    }
    Eigen::MatrixXd V(npts, degree + 1);
    for (Eigen::Index i = 0; i < npts; ++i) {
      double p = 1.0;
      for (int d = 0; d <= degree; ++d, p *= k[i] / k_span) V(i, d) = p;
    }
    const Eigen::VectorXd c = V.colPivHouseholderQr().solve(y);
    if (coeffs) *coeffs = c;
    return (V * c - y).cwiseAbs().maxCoeff();
  };

  PolynomialFit out;
  out.degree = l;
  Eigen::VectorXd c;
  out.residual = fit(l, &c);
  out.lower_degree_residual = fit(l - 1, nullptr);
  const double cmax = c.cwiseAbs().maxCoeff();
  for (int d = 0; d <= l; ++d) {
    if ((d - l) % 2 != 0) out.parity_defect = std::max(out.parity_defect, std::abs(c(d)) / cmax);
    out.coefficients.push_back(c(d) * dmax / std::pow(k_span, d));
  }
  return out;
}

double second_moment(int l, int m) {
  const AmplitudeTable t = amplitude_table(HarmonicIndex::make(l, m), MomentumGrid::standard());
  const auto& k = t.grid.values();
  std::vector<double> y(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) y[i] = k[i] * k[i] * std::norm(t.values[i]);
  return trapezoid(k, y);
}

double momentum_uncertainty_au(double r_angstrom) {
  if (!(r_angstrom > 0.0))
    throw NumericalError(ErrorCode::NonpositiveRadius, "radius must be positive");
  return kBohrRadiusAngstrom / (std::sqrt(3.0) * r_angstrom);
}

}  // namespace geomom
