#include "geomom/sphere_operators.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

#include "geomom/error.hpp"
#include "geomom/legendre.hpp"
#include "geomom/momentum_rep.hpp"
#include "geomom/quadrature.hpp"

namespace geomom {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

constexpr OperatorId kGenerators[] = {OperatorId::px, OperatorId::py, OperatorId::pz,
                                      OperatorId::Lx, OperatorId::Ly, OperatorId::Lz,
                                      OperatorId::L2};

Eigen::MatrixXcd basis_samples(const SphereGrid& grid, int l_max) {
  const int npts = grid.n_theta() * grid.n_phi();
  Eigen::MatrixXcd B(npts, basis_size(l_max));
  for (int col = 0; col < basis_size(l_max); ++col) {
    const HarmonicIndex idx = HarmonicIndex::from_flat(col);
    for (int i = 0; i < grid.n_theta(); ++i) {
      const double theta_part = spherical_harmonic_theta(idx.l, idx.m, grid.theta(i)).v;
      for (int j = 0; j < grid.n_phi(); ++j)
        B(i * grid.n_phi() + j, col) = theta_part * std::polar(1.0, idx.m * grid.phi(j));
    }
  }
  return B;
}

Eigen::MatrixXcd applied_samples(OperatorId op, const SphereGrid& grid, int l_max, double hbar) {
  const int npts = grid.n_theta() * grid.n_phi();
  Eigen::MatrixXcd A(npts, basis_size(l_max));
  for (int col = 0; col < basis_size(l_max); ++col) {
    const HarmonicIndex idx = HarmonicIndex::from_flat(col);
    for (int i = 0; i < grid.n_theta(); ++i)
      for (int j = 0; j < grid.n_phi(); ++j)
        A(i * grid.n_phi() + j, col) = apply_to_harmonic(op, idx, grid.theta(i), grid.phi(j), hbar);
  }
  return A;
}

Eigen::VectorXd weight_vector(const SphereGrid& grid) {
  Eigen::VectorXd w(grid.n_theta() * grid.n_phi());
  for (int i = 0; i < grid.n_theta(); ++i)
    for (int j = 0; j < grid.n_phi(); ++j) w(i * grid.n_phi() + j) = grid.weight(i);
  return w;
}

void check_interior(int l_max, int l_interior) {
  if (l_interior > l_max - 2 || l_interior < 0)
    throw NumericalError(ErrorCode::TruncationTooTight,
                         "interior l <= " + std::to_string(l_interior) +
                             " needs l_max >= l_interior + 2 (l_max = " + std::to_string(l_max) + ")");
}

}  // namespace

HarmonicIndex HarmonicIndex::make(int l, int m) {
  if (l < 0 || std::abs(m) > l)
    throw NumericalError(ErrorCode::InvalidArgument,
                         "invalid harmonic index (l=" + std::to_string(l) + ", m=" + std::to_string(m) + ")");
  return {l, m};
}

HarmonicIndex HarmonicIndex::from_flat(int index) {
  const int l = static_cast<int>(std::sqrt(static_cast<double>(index)));
  return {l, index - l * l - l};
}

std::string_view to_string(OperatorId op) {
  switch (op) {
    case OperatorId::px: return "px";
    case OperatorId::py: return "py";
    case OperatorId::pz: return "pz";
    case OperatorId::Lx: return "Lx";
    case OperatorId::Ly: return "Ly";
    case OperatorId::Lz: return "Lz";
    case OperatorId::L2: return "L2";
  }
  return "?";
}

OperatorId parse_operator(std::string_view name) {
  for (OperatorId op : kGenerators)
    if (to_string(op) == name) return op;
  throw NumericalError(ErrorCode::InvalidArgument, "unknown operator '" + std::string(name) + "'");
}

cplx apply_to_harmonic(OperatorId op, HarmonicIndex index, double theta, double phi, double hbar) {
  const Jet2 f = spherical_harmonic_theta(index.l, index.m, theta);
  const cplx phase = std::polar(1.0, index.m * phi);
  const cplx y = f.v * phase;
  const cplx y_theta = f.d1 * phase;
  const cplx y_theta2 = f.d2 * phase;
  const cplx y_phi = kI * double(index.m) * y;
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const double cot = ct / st;
  switch (op) {
    case OperatorId::px:
      return -kI * hbar * (ct * cp * y_theta - sp / st * y_phi - st * cp * y);
    case OperatorId::py:
      return -kI * hbar * (ct * sp * y_theta + cp / st * y_phi - st * sp * y);
    case OperatorId::pz:
      return kI * hbar * (st * y_theta + ct * y);
    case OperatorId::Lx:
      return kI * hbar * (sp * y_theta + cot * cp * y_phi);
    case OperatorId::Ly:
      return -kI * hbar * (cp * y_theta - cot * sp * y_phi);
    case OperatorId::Lz:
      return -kI * hbar * y_phi;
    case OperatorId::L2:
      return -hbar * hbar *
             (y_theta2 + cot * y_theta - double(index.m) * double(index.m) / (st * st) * y);
  }
  return {};
}

SphereGrid::SphereGrid(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1)
    throw NumericalError(ErrorCode::InvalidArgument, "sphere grid needs positive sizes");
  const QuadratureRule gl = gauss_legendre(n_theta);
  // Nodes ordered by increasing θ (decreasing cosθ).
  for (int i = n_theta - 1; i >= 0; --i) {
    theta_.push_back(std::acos(gl.nodes[i]));
    weight_.push_back(gl.weights[i] * 2.0 * kPi / n_phi);
  }
  for (int j = 0; j < n_phi; ++j) phi_.push_back(2.0 * kPi * j / n_phi);
}

GridFunction GridFunction::sample(const SphereGrid& grid, const std::function<cplx(double, double)>& f) {
  GridFunction out{grid, Eigen::MatrixXcd(grid.n_theta(), grid.n_phi())};
  for (int i = 0; i < grid.n_theta(); ++i)
    for (int j = 0; j < grid.n_phi(); ++j) out.values(i, j) = f(grid.theta(i), grid.phi(j));
  return out;
}

GridFunction GridFunction::harmonic(const SphereGrid& grid, HarmonicIndex index) {
  return sample(grid, [index](double t, double p) { return spherical_harmonic(index.l, index.m, t, p); });
}

Eigen::VectorXcd harmonic_coefficients(const GridFunction& f, int l_max) {
  const Eigen::MatrixXcd B = basis_samples(f.grid, l_max);
  Eigen::VectorXcd flat(f.grid.n_theta() * f.grid.n_phi());
  for (int i = 0; i < f.grid.n_theta(); ++i)
    for (int j = 0; j < f.grid.n_phi(); ++j) flat(i * f.grid.n_phi() + j) = f.values(i, j);
  return B.adjoint() * weight_vector(f.grid).asDiagonal() * flat;
}

GridFunction apply_operator(OperatorId op, const GridFunction& f, int l_max, double hbar) {
  if (f.grid.n_theta() <= l_max || f.grid.n_phi() <= 2 * l_max + 1)
    throw NumericalError(ErrorCode::GridTooCoarse,
                         "grid " + std::to_string(f.grid.n_theta()) + "x" +
                             std::to_string(f.grid.n_phi()) + " cannot resolve l_max = " +
                             std::to_string(l_max));
  const Eigen::VectorXcd c = harmonic_coefficients(f, l_max);
  const Eigen::VectorXcd out = applied_samples(op, f.grid, l_max, hbar) * c;
  GridFunction result{f.grid, Eigen::MatrixXcd(f.grid.n_theta(), f.grid.n_phi())};
  for (int i = 0; i < f.grid.n_theta(); ++i)
    for (int j = 0; j < f.grid.n_phi(); ++j) result.values(i, j) = out(i * f.grid.n_phi() + j);
  return result;
}

OperatorMatrix operator_matrix(OperatorId op, int l_max, double hbar) {
  return operator_matrix(op, l_max, SphereGrid(2 * l_max + 4, 4 * l_max + 4), hbar);
}

OperatorMatrix operator_matrix(OperatorId op, int l_max, const SphereGrid& grid, double hbar) {
  if (l_max < 1) throw NumericalError(ErrorCode::InvalidArgument, "operator_matrix needs l_max >= 1");
  const Eigen::MatrixXcd B = basis_samples(grid, l_max);
  const Eigen::MatrixXcd A = applied_samples(op, grid, l_max, hbar);
  return {op, l_max, hbar, B.adjoint() * weight_vector(grid).asDiagonal() * A};
}

std::vector<AlgebraRelation> so31_relations() {
  using O = OperatorId;
  const cplx i = kI;
  return {
      {"[px,py]=-i hbar Lz", O::px, O::py, {{-i, O::Lz}}},
      {"[py,pz]=-i hbar Lx", O::py, O::pz, {{-i, O::Lx}}},
      {"[pz,px]=-i hbar Ly", O::pz, O::px, {{-i, O::Ly}}},
      {"[Lx,py]=i hbar pz", O::Lx, O::py, {{i, O::pz}}},
      {"[Ly,pz]=i hbar px", O::Ly, O::pz, {{i, O::px}}},
      {"[Lz,px]=i hbar py", O::Lz, O::px, {{i, O::py}}},
      {"[Lx,Ly]=i hbar Lz", O::Lx, O::Ly, {{i, O::Lz}}},
      {"[Ly,Lz]=i hbar Lx", O::Ly, O::Lz, {{i, O::Lx}}},
      {"[Lz,Lx]=i hbar Ly", O::Lz, O::Lx, {{i, O::Ly}}},
      {"[Lx,pz]=-i hbar py", O::Lx, O::pz, {{-i, O::py}}},
      {"[Ly,px]=-i hbar pz", O::Ly, O::px, {{-i, O::pz}}},
      {"[Lz,py]=-i hbar px", O::Lz, O::py, {{-i, O::px}}},
      {"[px,Lx]=0", O::px, O::Lx, {}},
      {"[py,Ly]=0", O::py, O::Ly, {}},
      {"[pz,Lz]=0", O::pz, O::Lz, {}},
  };
}

GeneratorSet::GeneratorSet(int l_max, double hbar) : l_max_(l_max), hbar_(hbar) {
  for (OperatorId op : kGenerators) mats_.push_back(operator_matrix(op, l_max, hbar).entries);
}

const Eigen::MatrixXcd& GeneratorSet::operator[](OperatorId op) const {
  return mats_[static_cast<std::size_t>(op)];
}

double commutator_residual(const GeneratorSet& gens, const AlgebraRelation& rel, int l_interior) {
  check_interior(gens.l_max(), l_interior);
  const Eigen::MatrixXcd& A = gens[rel.a];
  const Eigen::MatrixXcd& B = gens[rel.b];
  Eigen::MatrixXcd diff = A * B - B * A;
  for (const OperatorTerm& t : rel.expected) diff -= t.coeff * gens.hbar() * gens[t.op];
  const int n = basis_size(l_interior);
  return diff.topLeftCorner(n, n).cwiseAbs().maxCoeff();
}

double commutator_residual(OperatorId a, OperatorId b, std::span<const OperatorTerm> expected,
                           int l_max, int l_interior, double hbar) {
  check_interior(l_max, l_interior);
  const GeneratorSet gens(l_max, hbar);
  return commutator_residual(gens, {"", a, b, {expected.begin(), expected.end()}}, l_interior);
}

double rotation_equivalence_residual(GeneratorFamily family, RotationAxis axis, int l_max,
                                     int l_interior, double hbar, double angle) {
  check_interior(l_max, l_interior);
  const bool momentum = family == GeneratorFamily::momentum;
  const OperatorId fz = momentum ? OperatorId::pz : OperatorId::Lz;
  OperatorId target;
  OperatorId generator;
  double sign;
  if (axis == RotationAxis::x_from_z) {
    target = momentum ? OperatorId::px : OperatorId::Lx;
    generator = OperatorId::Ly;
    sign = -1.0;
  } else {
    target = momentum ? OperatorId::py : OperatorId::Ly;
    generator = OperatorId::Lx;
    sign = 1.0;
  }
  const Eigen::MatrixXcd G = operator_matrix(generator, l_max, hbar).entries;
  const Eigen::MatrixXcd Fz = operator_matrix(fz, l_max, hbar).entries;
  const Eigen::MatrixXcd Ft = operator_matrix(target, l_max, hbar).entries;
  const Eigen::MatrixXcd U = (G * (sign * kI * angle / hbar)).exp();
  const Eigen::MatrixXcd Uinv = (G * (-sign * kI * angle / hbar)).exp();
  const Eigen::MatrixXcd diff = U * Fz * Uinv - (std::cos(angle) * Fz + std::sin(angle) * Ft);
  const int n = basis_size(l_interior);
  return diff.topLeftCorner(n, n).cwiseAbs().maxCoeff();
}

cplx pz_eigenfunction(double p, int m, double theta, double phi, double hbar) {
  const double st = std::sin(theta);
  if (!(theta > 0.0 && theta < kPi) || st == 0.0)
    throw NumericalError(ErrorCode::PoleSingularity, "p_z eigenfunction is singular at the poles");
  const double k = p / hbar;
  const double u = std::log(std::tan(0.5 * theta));
  return 1.0 / std::sqrt(2.0 * kPi * hbar) / st * std::polar(1.0, -k * u) *
         std::polar(1.0 / std::sqrt(2.0 * kPi), m * phi);
}

double pz_eigenfunction_residual(double p, int m, double theta, double phi, double hbar) {
  const cplx psi = pz_eigenfunction(p, m, theta, phi, hbar);
  const double st = std::sin(theta), ct = std::cos(theta);
  const double k = p / hbar;
  // ψ = A(θ) E(θ) Φ(φ) with A = 1/sinθ, E = exp(-ik ln tan(θ/2)).
  const double amp = 1.0 / st;
  const double amp_theta = -ct / (st * st);
  const cplx phase = psi / amp;
  const cplx phase_theta = phase * (-kI * k / st);
  const cplx psi_theta = amp_theta * phase + amp * phase_theta;
  const cplx pz_psi = kI * hbar * (st * psi_theta + ct * psi);
  return std::abs(pz_psi - p * psi) / std::max(std::abs(p * psi), hbar * std::abs(psi));
}

double lz_eigenfunction_residual(double p, int m, double theta, double phi, double hbar) {
  const cplx psi = pz_eigenfunction(p, m, theta, phi, hbar);
  const cplx lz_psi = -kI * hbar * (kI * double(m) * psi);
  return std::abs(lz_psi - m * hbar * psi) / (hbar * std::abs(psi));
}

cplx windowed_overlap(double p_prime, int m_prime, double p, int m, double window, double hbar) {
  if (!(window > 0.0)) throw NumericalError(ErrorCode::InvalidArgument, "window must be positive");
  // Azimuthal factor ∫ e^{i(m-m')φ} dφ / 2π, exact on 2(|m|+|m'|)+2 uniform nodes.
  const int nphi = 2 * (std::abs(m) + std::abs(m_prime)) + 2;
  cplx azimuthal = 0.0;
  for (int j = 0; j < nphi; ++j) azimuthal += std::polar(1.0, (m - m_prime) * 2.0 * kPi * j / nphi);
  azimuthal /= double(nphi);
  if (std::abs(azimuthal) < 1e-14) return 0.0;

  // Panels graded so each spans a fixed step in ln tan(θ/2); the integrand
  // itself is evaluated in θ with the sinθ measure.
  const double dk = std::abs(p_prime - p) / hbar;
  double du = 0.25;
  if (dk > 0.0) du = std::min(du, 2.0 * kPi / dk / 4.0);
  const int panels = static_cast<int>(std::ceil(2.0 * window / du));
  std::vector<double> breaks(panels + 1);
  for (int j = 0; j <= panels; ++j) breaks[j] = u_to_theta(-window + 2.0 * window * j / panels);
  const QuadratureRule rule = composite_gauss_legendre(breaks, 12);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double th = rule.nodes[i];
    const cplx a = pz_eigenfunction(p_prime, 0, th, 0.0, hbar);
    const cplx b = pz_eigenfunction(p, 0, th, 0.0, hbar);
    sum += rule.weights[i] * std::conj(a) * b * std::sin(th);
  }
  // pz_eigenfunction carries (2π)^{-1/2} from the φ factor at m = 0; undo it
  // for both factors and apply the exact azimuthal integral instead.
  return sum * (2.0 * kPi) * azimuthal;
}

}  // namespace geomom
