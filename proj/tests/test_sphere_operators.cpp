#include <doctest.h>

#include <cmath>
#include <random>

#include "geomom/error.hpp"
#include "geomom/legendre.hpp"
#include "geomom/sphere_operators.hpp"

using namespace geomom;

namespace {

const cplx I{0.0, 1.0};

double block_max_outside_rule(const Eigen::MatrixXcd& M, int l_max, bool (*allowed)(HarmonicIndex, HarmonicIndex)) {
  double worst = 0.0;
  for (int r = 0; r < basis_size(l_max); ++r)
    for (int c = 0; c < basis_size(l_max); ++c)
      if (!allowed(HarmonicIndex::from_flat(r), HarmonicIndex::from_flat(c)))
        worst = std::max(worst, std::abs(M(r, c)));
  return worst;
}

}  // namespace

TEST_CASE("harmonic index flattening") {
  for (int i = 0; i < basis_size(6); ++i) CHECK(HarmonicIndex::from_flat(i).flat() == i);
  CHECK(HarmonicIndex::make(2, -2).flat() == 4);
  CHECK_THROWS_AS(HarmonicIndex::make(1, 2), NumericalError);
}

TEST_CASE("Condon-Shortley Legendre against the standard library") {
  // std::assoc_legendre omits the (-1)^m phase.
  for (int l = 0; l <= 8; ++l)
    for (int m = 0; m <= l; ++m)
      for (double x : {-0.93, -0.2, 0.0, 0.45, 0.99}) {
        const double ref = ((m % 2) ? -1.0 : 1.0) * std::assoc_legendre(l, m, x);
        CHECK(assoc_legendre(l, m, x) == doctest::Approx(ref).epsilon(1e-12));
      }
  CHECK(assoc_legendre(0, 0, 0.3) == 1.0);
  CHECK(assoc_legendre(1, 1, 0.5) == doctest::Approx(-std::sqrt(0.75)).epsilon(1e-15));
  CHECK(assoc_legendre(2, 0, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(assoc_legendre(2, -1, 0.5) == doctest::Approx(-assoc_legendre(2, 1, 0.5) / 6.0).epsilon(1e-15));
}

TEST_CASE("analytic action on basis functions") {
  const double th = 0.83, ph = 2.1;
  CHECK(std::abs(apply_to_harmonic(OperatorId::Lz, {1, 1}, th, ph) - spherical_harmonic(1, 1, th, ph)) < 1e-15);
  CHECK(std::abs(apply_to_harmonic(OperatorId::pz, {0, 0}, th, ph) -
                 I / std::sqrt(3.0) * spherical_harmonic(1, 0, th, ph)) < 1e-15);
  CHECK(std::abs(apply_to_harmonic(OperatorId::L2, {3, 2}, th, ph) - 12.0 * spherical_harmonic(3, 2, th, ph)) < 1e-13);
  const double hbar = 0.4;
  CHECK(std::abs(apply_to_harmonic(OperatorId::L2, {3, 2}, th, ph, hbar) -
                 12.0 * hbar * hbar * spherical_harmonic(3, 2, th, ph)) < 1e-14);
}

TEST_CASE("apply_operator on grid samples") {
  const int L = 4;
  const SphereGrid grid(L + 3, 2 * L + 4);
  const auto y11 = GridFunction::harmonic(grid, {1, 1});
  const auto lz = apply_operator(OperatorId::Lz, y11, L);
  CHECK((lz.values - y11.values).cwiseAbs().maxCoeff() < 1e-12);

  const auto y00 = GridFunction::harmonic(grid, {0, 0});
  const auto y10 = GridFunction::harmonic(grid, {1, 0});
  const auto pz = apply_operator(OperatorId::pz, y00, L);
  CHECK((pz.values - I / std::sqrt(3.0) * y10.values).cwiseAbs().maxCoeff() < 1e-12);

  const auto y32 = GridFunction::harmonic(grid, {3, 2});
  const auto l2 = apply_operator(OperatorId::L2, y32, L);
  CHECK((l2.values - 12.0 * y32.values).cwiseAbs().maxCoeff() < 1e-11);

  // A superposition picks up each component's eigenvalue.
  auto mix = y11;
  mix.values = 0.6 * y11.values + 0.8 * I * y32.values;
  const auto lz_mix = apply_operator(OperatorId::Lz, mix, L);
  CHECK((lz_mix.values - (0.6 * y11.values + 1.6 * I * y32.values)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("grid too coarse for the band limit") {
  const SphereGrid grid(4, 20);
  const auto f = GridFunction::harmonic(grid, {1, 0});
  try {
    apply_operator(OperatorId::pz, f, 4);
    FAIL("expected GridTooCoarse");
  } catch (const NumericalError& e) {
    CHECK(e.code() == ErrorCode::GridTooCoarse);
  }
  CHECK_THROWS_AS(apply_operator(OperatorId::pz, GridFunction::harmonic(SphereGrid(10, 9), {1, 0}), 4),
                  NumericalError);
}

TEST_CASE("Lz matrix is diagonal with m hbar") {
  const auto Lz = operator_matrix(OperatorId::Lz, 2).entries;
  for (int r = 0; r < basis_size(2); ++r)
    for (int c = 0; c < basis_size(2); ++c) {
      const cplx expect = r == c ? cplx(HarmonicIndex::from_flat(r).m) : cplx(0.0);
      CHECK(std::abs(Lz(r, c) - expect) < 1e-12);
    }
}

TEST_CASE("pz matrix element <Y10|pz|Y00> against a midpoint-rule integral") {
  // i ∫ cos²θ · √3/(4π) dΩ by a plain midpoint rule in θ (φ integral = 2π).
  const int n = 20000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double th = (i + 0.5) * M_PI / n;
    sum += std::cos(th) * std::cos(th) * std::sin(th);
  }
  const cplx oracle = I * std::sqrt(3.0) / (4.0 * M_PI) * 2.0 * M_PI * sum * M_PI / double(n);
  CHECK(std::abs(oracle - I / std::sqrt(3.0)) < 1e-8);
  const auto pz = operator_matrix(OperatorId::pz, 1).entries;
  const cplx entry = pz(HarmonicIndex{1, 0}.flat(), HarmonicIndex{0, 0}.flat());
  CHECK(std::abs(entry - oracle) < 1e-8);
  CHECK(std::abs(entry - I / std::sqrt(3.0)) < 1e-14);
}

TEST_CASE("generator matrices: hermiticity and selection rules") {
  const int L = 8;
  const GeneratorSet gens(L);
  for (OperatorId op : {OperatorId::px, OperatorId::py, OperatorId::pz, OperatorId::Lx, OperatorId::Ly,
                        OperatorId::Lz, OperatorId::L2}) {
    CAPTURE(to_string(op));
    CHECK((gens[op] - gens[op].adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK(block_max_outside_rule(gens[OperatorId::pz], L, [](HarmonicIndex a, HarmonicIndex b) {
          return std::abs(a.l - b.l) == 1 && a.m == b.m;
        }) < 1e-10);
  for (OperatorId op : {OperatorId::px, OperatorId::py})
    CHECK(block_max_outside_rule(gens[op], L, [](HarmonicIndex a, HarmonicIndex b) {
            return std::abs(a.l - b.l) == 1 && std::abs(a.m - b.m) == 1;
          }) < 1e-10);
  for (int r = 0; r < basis_size(L); ++r) {
    const int l = HarmonicIndex::from_flat(r).l;
    CHECK(std::abs(gens[OperatorId::L2](r, r) - double(l * (l + 1))) < 1e-10);
  }
  CHECK(block_max_outside_rule(gens[OperatorId::L2], L, [](HarmonicIndex a, HarmonicIndex b) {
          return a == b;
        }) < 1e-10);
}

TEST_CASE("matrix entries are converged in the quadrature grid") {
  const int L = 6;
  for (OperatorId op : {OperatorId::px, OperatorId::pz, OperatorId::Ly, OperatorId::L2}) {
    const auto base = operator_matrix(op, L).entries;
    const auto fine = operator_matrix(op, L, SphereGrid(2 * (2 * L + 4), 2 * (4 * L + 4))).entries;
    CHECK((base - fine).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("so(3,1) commutation relations on the interior block") {
  for (double hbar : {1.0, 0.5}) {
    const GeneratorSet gens(12, hbar);
    for (const auto& rel : so31_relations()) {
      CAPTURE(rel.name);
      CHECK(commutator_residual(gens, rel, 10) <= 1e-8 * hbar * hbar);
    }
  }
  const OperatorTerm lz[] = {{I, OperatorId::Lz}};
  CHECK(commutator_residual(OperatorId::Lx, OperatorId::Ly, lz, 6, 4) <= 1e-8);
  // A wrong sign is detected.
  const OperatorTerm wrong[] = {{-I, OperatorId::Lz}};
  CHECK(commutator_residual(OperatorId::Lx, OperatorId::Ly, wrong, 6, 4) > 1.0);
}

TEST_CASE("truncation guard") {
  const OperatorTerm none[] = {{0.0, OperatorId::Lz}};
  try {
    commutator_residual(OperatorId::pz, OperatorId::Lz, none, 6, 5);
    FAIL("expected TruncationTooTight");
  } catch (const NumericalError& e) {
    CHECK(e.code() == ErrorCode::TruncationTooTight);
  }
  CHECK_THROWS_AS(rotation_equivalence_residual(GeneratorFamily::momentum, RotationAxis::x_from_z, 6, 5),
                  NumericalError);
}

TEST_CASE("rotations map the z pair onto the x and y pairs") {
  for (auto family : {GeneratorFamily::momentum, GeneratorFamily::angular_momentum})
    for (auto axis : {RotationAxis::x_from_z, RotationAxis::y_from_z})
      CHECK(rotation_equivalence_residual(family, axis, 12, 10) <= 1e-6);
  CHECK(rotation_equivalence_residual(GeneratorFamily::momentum, RotationAxis::x_from_z, 6, 4, 1.0, 0.0) == 0.0);
  CHECK(rotation_equivalence_residual(GeneratorFamily::angular_momentum, RotationAxis::y_from_z, 6, 4, 1.0, 0.7) <= 1e-10);
  CHECK(rotation_equivalence_residual(GeneratorFamily::momentum, RotationAxis::y_from_z, 6, 4, 2.0) <= 1e-10);
}

TEST_CASE("pz eigenfunctions") {
  CHECK(std::abs(pz_eigenfunction(0.0, 0, M_PI / 2, 0.0) - 1.0 / (2 * M_PI)) < 1e-16);
  CHECK(std::abs(pz_eigenfunction(0.0, 0, M_PI / 2, 0.0, 2.0) - 1.0 / (2 * M_PI * std::sqrt(2.0))) < 1e-16);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> th(0.01, M_PI - 0.01), ph(0.0, 2 * M_PI), pp(-20.0, 20.0);
  std::uniform_int_distribution<int> mm(-6, 6);
  for (int i = 0; i < 100; ++i) {
    const double t = th(rng), f = ph(rng), p = pp(rng);
    const int m = mm(rng);
    CHECK(pz_eigenfunction_residual(p, m, t, f) <= 1e-10);
    CHECK(lz_eigenfunction_residual(p, m, t, f) <= 1e-14);
  }
  // A wrong eigenvalue is visible.
  CHECK(pz_eigenfunction_residual(1.0, 0, 1.0, 0.0) < 1e-14);
  for (double theta : {0.0, M_PI}) {
    try {
      pz_eigenfunction(1.0, 0, theta, 0.0);
      FAIL("expected PoleSingularity");
    } catch (const NumericalError& e) {
      CHECK(e.code() == ErrorCode::PoleSingularity);
    }
  }
}

TEST_CASE("windowed overlaps follow the Dirichlet kernel") {
  for (double U : {2.0, 5.0, 10.0, 20.0}) {
    CAPTURE(U);
    // Near θ = π the nodes sit within ~e^{-U} of the pole, so double spacing limits accuracy.
    CHECK(windowed_overlap(1.5, 2, 1.5, 2, U).real() == doctest::Approx(U / M_PI).epsilon(1e-8));
    const double dp = 0.37;
    const double kernel = std::sin(dp * U) / (M_PI * dp);
    CHECK(std::abs(windowed_overlap(1.0 + dp, 1, 1.0, 1, U) - kernel) < 1e-8);
    CHECK(std::abs(windowed_overlap(1.0, 1, 1.0, 2, U)) < 1e-14);
  }
  // Peak slope in U.
  const double slope = (windowed_overlap(0.0, 0, 0.0, 0, 12.0).real() - windowed_overlap(0.0, 0, 0.0, 0, 4.0).real()) / 8.0;
  CHECK(slope == doctest::Approx(1.0 / M_PI).epsilon(0.01));
  const double hbar = 0.5;
  CHECK(windowed_overlap(0.3, 0, 0.3, 0, 4.0, hbar).real() == doctest::Approx(4.0 / (M_PI * hbar)).epsilon(1e-10));
}
