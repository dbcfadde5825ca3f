#include <cmath>
#include <numbers>

#include "geomom/error.hpp"
#include "geomom/momentum_rep.hpp"

namespace geomom {
namespace {

double hermite_function(int n, double x) {
  double prev = 0.0;
  double cur = std::exp(-0.5 * x * x) / std::pow(std::numbers::pi, 0.25);
  for (int j = 0; j < n; ++j) {
    const double next = std::sqrt(2.0 / (j + 1.0)) * x * cur - std::sqrt(j / (j + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

double ho_momentum_density(int n, double k, double beta) {
  if (n < 0 || !(beta > 0.0))
    throw NumericalError(ErrorCode::InvalidArgument, "oscillator needs n >= 0 and beta > 0");
  const double phi = hermite_function(n, k / beta);
  return phi * phi / beta;
}

double variance_matched_beta(int n, double second_moment) {
  // ⟨x²⟩ = n + 1/2 for the n-th Hermite function.
  return std::sqrt(second_moment / (n + 0.5));
}

double support_width(const std::vector<double>& k, const std::vector<double>& density, double mass) {
  std::vector<double> cdf(k.size(), 0.0);
  for (std::size_t i = 1; i < k.size(); ++i)
    cdf[i] = cdf[i - 1] + 0.5 * (k[i] - k[i - 1]) * (density[i] + density[i - 1]);
  const double total = cdf.back();
  auto quantile = [&](double q) {
    const double target = q * total;
    for (std::size_t i = 1; i < k.size(); ++i) {
      if (cdf[i] >= target) {
        const double span = cdf[i] - cdf[i - 1];
        const double t = span > 0.0 ? (target - cdf[i - 1]) / span : 0.0;
        return k[i - 1] + t * (k[i] - k[i - 1]);
      }
    }
    return k.back();
  };
  return quantile(0.5 + 0.5 * mass) - quantile(0.5 - 0.5 * mass);
}

HoComparison compare_density(const std::vector<double>& k, const std::vector<double>& q, int n, double beta) {
  if (!(beta > 0.0)) throw NumericalError(ErrorCode::InvalidArgument, "oscillator width must be positive");
  HoComparison out;
  out.beta = beta;
  std::vector<double> ho(k.size()), diff(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    ho[i] = ho_momentum_density(n, k[i], beta);
    diff[i] = std::abs(q[i] - ho[i]);
    out.sup_diff = std::max(out.sup_diff, diff[i]);
  }
  for (std::size_t i = 1; i < k.size(); ++i)
    out.l1_diff += 0.5 * (k[i] - k[i - 1]) * (diff[i] + diff[i - 1]);
  out.q_support_width = support_width(k, q);
  out.ho_support_width = support_width(k, ho);
  return out;
}

HoComparison compare_ho(int l, int n, double beta) {
  const MomentumGrid grid = MomentumGrid::standard();
  const auto q = amplitude_table({l, 0}, grid).density();
  return compare_density(grid.values(), q, n, beta > 0.0 ? beta : variance_matched_beta(n, second_moment(l, 0)));
}

}  // namespace geomom
