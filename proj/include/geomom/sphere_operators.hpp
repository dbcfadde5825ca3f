#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace geomom {

using cplx = std::complex<double>;

/// Quantum numbers of Y_lm; |m| <= l is enforced by make().
struct HarmonicIndex {
  int l = 0;
  int m = 0;

  static HarmonicIndex make(int l, int m);
  /// Position in the (l, m)-ordered basis: l² + l + m.
  int flat() const { return l * l + l + m; }
  static HarmonicIndex from_flat(int index);
  friend bool operator==(const HarmonicIndex&, const HarmonicIndex&) = default;
};

/// Basis size of {Y_lm : l <= l_max}.
constexpr int basis_size(int l_max) { return (l_max + 1) * (l_max + 1); }

/// Operators on S² in the dimensionless convention p_i r -> p_i:
///   p_x = -iħ(cosθ cosφ ∂θ - sinφ/sinθ ∂φ - sinθ cosφ)
///   p_y = -iħ(cosθ sinφ ∂θ + cosφ/sinθ ∂φ - sinθ sinφ)
///   p_z =  iħ(sinθ ∂θ + cosθ)
/// and the orbital angular momentum L_x, L_y, L_z, L².
enum class OperatorId { px, py, pz, Lx, Ly, Lz, L2 };

std::string_view to_string(OperatorId op);
OperatorId parse_operator(std::string_view name);

/// (Op Y_lm)(θ, φ) from exact θ-derivatives of Y_lm. θ must be off the poles.
cplx apply_to_harmonic(OperatorId op, HarmonicIndex index, double theta, double phi,
                       double hbar = 1.0);

/// Tensor grid with Gauss–Legendre nodes in cosθ and uniform nodes in φ.
class SphereGrid {
 public:
  SphereGrid(int n_theta, int n_phi);

  int n_theta() const { return static_cast<int>(theta_.size()); }
  int n_phi() const { return static_cast<int>(phi_.size()); }
  double theta(int i) const { return theta_[i]; }
  double phi(int j) const { return phi_[j]; }
  /// Quadrature weight of node (i, j) for ∫ dΩ.
  double weight(int i) const { return weight_[i]; }

 private:
  std::vector<double> theta_;
  std::vector<double> phi_;
  std::vector<double> weight_;
};

/// Samples f(θ_i, φ_j) on a SphereGrid, row i = θ node, column j = φ node.
struct GridFunction {
  SphereGrid grid;
  Eigen::MatrixXcd values;

  static GridFunction sample(const SphereGrid& grid, const std::function<cplx(double, double)>& f);
  static GridFunction harmonic(const SphereGrid& grid, HarmonicIndex index);
};

/// Expansion coefficients ⟨Y_lm|f⟩ for l <= l_max by grid quadrature, in
/// flat (l, m) order.
Eigen::VectorXcd harmonic_coefficients(const GridFunction& f, int l_max);

/// Applies an operator to band-limited grid samples: f is expanded in
/// {Y_lm : l <= l_max} and the operator acts analytically on each term.
/// Throws GridTooCoarse if n_theta <= l_max or n_phi <= 2 l_max + 1.
GridFunction apply_operator(OperatorId op, const GridFunction& f, int l_max, double hbar = 1.0);

/// ⟨Y_l'm'|Op|Y_lm⟩ over the truncated basis, row = (l', m'), col = (l, m).
struct OperatorMatrix {
  OperatorId op;
  int l_max;
  double hbar;
  Eigen::MatrixXcd entries;
};

/// Assembled with N_θ = 2 l_max + 4 and N_φ = 4 l_max + 4.
OperatorMatrix operator_matrix(OperatorId op, int l_max, double hbar = 1.0);
OperatorMatrix operator_matrix(OperatorId op, int l_max, const SphereGrid& grid, double hbar = 1.0);

/// One term coeff·ħ·Op in the right-hand side of a commutation relation.
struct OperatorTerm {
  cplx coeff;
  OperatorId op;
};

struct AlgebraRelation {
  std::string name;
  OperatorId a;
  OperatorId b;
  std::vector<OperatorTerm> expected;  // [a, b] = Σ coeff·ħ·op
};

/// The so(3,1) table: [p_i,p_j] = -iħε L_k, [L_i,p_j] = iħε p_k,
/// [L_i,L_j] = iħε L_k for cyclic (i,j,k), the anti-cyclic [L_i,p_j], and
/// [p_i, L_i] = 0.
std::vector<AlgebraRelation> so31_relations();

/// Caches the six generators at one truncation so residual sweeps assemble
/// each matrix once.
class GeneratorSet {
 public:
  explicit GeneratorSet(int l_max, double hbar = 1.0);

  const Eigen::MatrixXcd& operator[](OperatorId op) const;
  int l_max() const { return l_max_; }
  double hbar() const { return hbar_; }

 private:
  int l_max_;
  double hbar_;
  std::vector<Eigen::MatrixXcd> mats_;
};

/// Max-norm of [A, B] - Σ coeff·ħ·Op over rows/cols with l <= l_interior.
/// Throws TruncationTooTight if l_interior > l_max - 2.
double commutator_residual(OperatorId a, OperatorId b, std::span<const OperatorTerm> expected,
                           int l_max, int l_interior, double hbar = 1.0);
double commutator_residual(const GeneratorSet& gens, const AlgebraRelation& rel, int l_interior);

enum class GeneratorFamily { momentum, angular_momentum };
enum class RotationAxis {
  x_from_z,  // f_x = exp(-iθ L_y/ħ) f_z exp(iθ L_y/ħ) at θ = π/2
  y_from_z,  // f_y = exp( iθ L_x/ħ) f_z exp(-iθ L_x/ħ) at θ = π/2
};

/// Rotates f_z by `angle` and compares with cos(angle) f_z + sin(angle) f_x
/// (resp. f_y) on the interior block. Throws TruncationTooTight.
double rotation_equivalence_residual(GeneratorFamily family, RotationAxis axis, int l_max,
                                     int l_interior, double hbar = 1.0,
                                     double angle = 1.5707963267948966);

/// Simultaneous eigenfunction of (p_z, L_z) with eigenvalues (p, mħ):
/// (2πħ)^{-1/2} (sinθ)^{-1} exp(-i (p/ħ) ln tan(θ/2)) (2π)^{-1/2} e^{imφ}.
/// Throws PoleSingularity at θ ∈ {0, π}.
cplx pz_eigenfunction(double p, int m, double theta, double phi, double hbar = 1.0);

/// |p_z ψ - p ψ| / max(|p ψ|, ħ|ψ|) with p_z applied through the exact
/// θ-derivative of ψ.
double pz_eigenfunction_residual(double p, int m, double theta, double phi, double hbar = 1.0);

/// |L_z ψ - mħ ψ| / (ħ|ψ|) with ∂φ taken exactly.
double lz_eigenfunction_residual(double p, int m, double theta, double phi, double hbar = 1.0);

/// ⟨ψ_{p',m'}|ψ_{p,m}⟩ restricted to the band |ln tan(θ/2)| <= window,
/// integrated over θ with sinθ dθ dφ. For m' = m this is the Dirichlet
/// kernel sin((p'-p)U/ħ)/(π(p'-p)) whose peak U/(πħ) grows linearly in U.
cplx windowed_overlap(double p_prime, int m_prime, double p, int m, double window,
                      double hbar = 1.0);

}  // namespace geomom
