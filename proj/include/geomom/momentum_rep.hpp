#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "geomom/jet.hpp"
#include "geomom/sphere_operators.hpp"

namespace geomom {

// ---------------------------------------------------------------------------
// Stripe coordinates u = ln tan(θ/2), on which p_z = iħ ∂_u.

/// Throws PoleSingularity for θ outside (0, π).
double theta_to_u(double theta);
double u_to_theta(double u);

/// N_lm = sqrt((2l+1)/2 · (l-m)!/(l+m)!), which makes Y'_lm unit-normalized
/// on the stripe; Q_00 = (√π/2) sech(πk/2).
double normalization_nlm(int l, int m);

/// Y'_lm(u, φ) = N_lm P_l^m(-tanh u) / cosh u · e^{imφ} / √(2π).
cplx stripe_harmonic(int l, int m, double u, double phi);

/// u-dependent factor N_lm P_l^m(-tanh u)/cosh u with exact u-derivatives.
Jet2 stripe_profile(int l, int m, double u);

/// ∫∫ |Y'_lm|² du dφ over u ∈ [-40, 40].
double stripe_norm_integral(int l, int m);

/// Max over samples of the pointwise relative deviation of
/// L²(u,φ) = -ħ² cosh²u (∂_u² + 2 tanh u ∂_u + ∂_φ² + 1) applied to Y'_lm
/// from l(l+1)ħ² Y'_lm. The deviation at each u is measured against the
/// size of the terms the operator combines, cosh²u (|f''| + |2 tanh f'| +
/// |(1-m²) f|) + l(l+1)|f|, since the bracket cancels to O(sech²u) of them.
double l2u_residual(int l, int m, std::span<const double> u_samples);

// ---------------------------------------------------------------------------
// Geometric-momentum amplitudes Q_lm(p_z), normalized in k = p_z/ħ:
//   Q_lm = N_lm ∫ P_l^m(-tanh u)/cosh u · e^{iku} / √(2π) du.

/// Q(-k) = parity · Q(k) with parity (-1)^{l+m}.
int reflection_parity(int l, int m);

/// Closed forms for l <= 2. Overall signs are those of the standard table,
/// which differ from Condon–Shortley for (1, ±1); see phase_alignment.
/// z = p_z may be complex. Throws PoleHit within 1e-9 of a pole of the
/// sech/csch envelope and InvalidArgument for l > 2.
cplx q_lm_closed(int l, int m, cplx p, double hbar = 1.0);

/// Envelope kind of the l <= 2 closed forms: sech for even m, csch for odd.
enum class Envelope { sech, csch };
Envelope envelope_for(int m);

/// Q_lm(z ± 2iħ) from the exact shifts sech(x ± iπ) = -sech x and
/// csch(x ± iπ) = -csch x, avoiding evaluation next to poles.
cplx q_lm_closed_shifted(int l, int m, double p, int shift_sign, double hbar = 1.0);

/// Unit phase c with q_lm_numeric = c · q_lm_closed (l <= 2).
cplx phase_alignment(int l, int m);

/// Independent oracle: composite Gauss–Legendre quadrature of the Fourier
/// integral on u ∈ [-40, 40], panels no wider than min(1, 2π/|k|)/4.
/// Throws AccuracyLoss for |k| > 50.
cplx q_lm_numeric(int l, int m, double p, double hbar = 1.0);

/// Reusable quadrature for one momentum range: nodes are fixed by k_max
/// and every index shares the same oscillatory factors.
class FourierQuadrature {
 public:
  explicit FourierQuadrature(double k_max);

  std::size_t size() const { return nodes_.size(); }
  double k_max() const { return k_max_; }
  /// Q_lm(k) for every index, rows = indices, cols = k.
  Eigen::MatrixXcd amplitudes(std::span<const HarmonicIndex> indices, std::span<const double> k) const;

 private:
  double k_max_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

class MomentumGrid {
 public:
  /// Strictly increasing k values; throws InvalidArgument otherwise.
  explicit MomentumGrid(std::vector<double> k_values);
  /// k = -k_max, -k_max + step, ..., k_max (step must divide k_max).
  static MomentumGrid symmetric(double k_max, double step);
  /// [-20, 20], step 0.02.
  static MomentumGrid standard();

  const std::vector<double>& values() const { return k_; }
  std::size_t size() const { return k_.size(); }
  bool symmetric() const { return symmetric_; }
  double k_max() const;

 private:
  std::vector<double> k_;
  bool symmetric_ = false;
};

enum class AmplitudeSource { closed_form, quadrature };
std::string_view to_string(AmplitudeSource source);

struct AmplitudeTable {
  HarmonicIndex index;
  MomentumGrid grid;
  std::vector<cplx> values;
  AmplitudeSource source;

  /// Trapezoid ∫ |Q|² dk over the grid.
  double norm() const;
  std::vector<double> density() const;
};

/// Closed forms when l <= 2 (unless quadrature is forced), quadrature
/// otherwise.
AmplitudeTable amplitude_table(HarmonicIndex index, const MomentumGrid& grid,
                               AmplitudeSource source);
AmplitudeTable amplitude_table(HarmonicIndex index, const MomentumGrid& grid);

/// Batched quadrature tables sharing one FourierQuadrature.
std::vector<AmplitudeTable> quadrature_tables(std::span<const HarmonicIndex> indices,
                                              const MomentumGrid& grid);

struct DistributionPoint {
  double k;
  double density;
};

/// (k, |Q_lm(k)|²) on the grid.
std::vector<DistributionPoint> distribution(int l, int m, const MomentumGrid& grid);

/// Residual of
///   l(l+1) Q(k) = ½A Q(k) + ¼(A - 2ik) Q(k - 2i) + ¼(A + 2ik) Q(k + 2i),
///   A = k² + m² - 1 (ħ = 1 units, k = p/ħ),
/// evaluated on the l <= 2 closed forms.
double difference_residual(int l, int m, double p, double hbar = 1.0);

/// Gram matrix ∫ Q*_{l'm} Q_{lm} dk for l, l' ∈ [|m|, l_max] on the
/// standard grid.
Eigen::MatrixXcd orthogonality_matrix(int m, int l_max);

/// Sign changes of the amplitude on the real line (after removing its
/// constant phase), ignoring samples below 1e-10 of the peak.
int count_nodes(const AmplitudeTable& table);

struct PolynomialFit {
  int degree = 0;
  double residual = 0.0;             // max |fit - data| / max |data|
  double lower_degree_residual = 0;  // same with degree - 1
  double parity_defect = 0.0;        // largest wrong-parity coefficient / largest coefficient
  std::vector<double> coefficients;  // in powers of k, ascending
};

/// Removes the sech(πk/2) (even m) or csch(πk/2) (odd m) envelope from
/// quadrature samples on k ∈ [-4, 4] and least-squares fits a degree-l
/// polynomial.
PolynomialFit polynomial_structure(int l, int m);

/// ⟨k²⟩ = ∫ k² |Q_lm|² dk.
double second_moment(int l, int m);

/// ħ/(√3 r) in atomic units ħ/a₀ for r in Ångström. Throws NonpositiveRadius.
double momentum_uncertainty_au(double r_angstrom);

inline constexpr double kBohrRadiusAngstrom = 0.529177;

// ---------------------------------------------------------------------------
// One-dimensional oscillator comparison.

/// |φ_n(k/β)|²/β with φ_n the unit-normalized Hermite function.
double ho_momentum_density(int n, double k, double beta);

/// β at which the n-th oscillator density has ⟨k²⟩ = second_moment.
double variance_matched_beta(int n, double second_moment);

struct HoComparison {
  double beta = 0.0;
  double sup_diff = 0.0;
  double l1_diff = 0.0;
  double q_support_width = 0.0;   // central 99% probability interval
  double ho_support_width = 0.0;
};

/// Sup and trapezoid L¹ distances between a density table q on k and the
/// n-th oscillator density of width beta.
HoComparison compare_density(const std::vector<double>& k, const std::vector<double>& q, int n, double beta);

/// Compares |Q_{l,0}|² with the n-th oscillator density on the standard
/// grid. beta <= 0 selects variance matching.
HoComparison compare_ho(int l, int n, double beta = 0.0);

/// Width of the interval holding the central `mass` of a density table.
double support_width(const std::vector<double>& k, const std::vector<double>& density,
                     double mass = 0.99);

}  // namespace geomom
