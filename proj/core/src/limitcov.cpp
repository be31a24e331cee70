#include "polymax/limitcov.hpp"

#include <cmath>
#include <stdexcept>

#include "polymax/polycircle.hpp"

namespace polymax {

namespace {

// h without the singularity guard: callers keep node points off 0 mod 2*pi.
inline double h_raw(double psi) {
  return 2.0 * std::log(2.0 * std::abs(std::sin(0.5 * psi)));
}

}  // namespace

double sigma_sq(const QuadratureConfig& q) {
  const auto f = [](double psi) {
    const double h = h_raw(psi);
    return h * h;
  };
  return integrate_log_singular(f, 0.0, kTau, true, true, q) / kTau;
}

double cov_kernel(double theta, const QuadratureConfig& q) {
  if (!(theta >= 0.0) || !(theta <= kTau))
    throw std::invalid_argument("cov_kernel: theta must lie in [0, 2*pi]");
  if (theta == 0.0 || theta == kTau) return sigma_sq(q);

  // h(psi + theta) is singular where psi + theta hits 2*pi, i.e. at the
  // interior point s = 2*pi - theta; split there and treat all log ends
  // geometrically. The shifted argument is expressed through the distance
  // to s (h is even and 2*pi-periodic), which stays exact near the
  // singularity where psi + theta - 2*pi would cancel catastrophically.
  const double s = kTau - theta;
  const auto f_lo = [s](double psi) { return h_raw(psi) * h_raw(s - psi); };
  const auto f_hi = [s](double psi) { return h_raw(psi) * h_raw(psi - s); };
  const double lo = integrate_log_singular(f_lo, 0.0, s, true, true, q);
  const double hi = integrate_log_singular(f_hi, s, kTau, true, true, q);
  return (lo + hi) / kTau;
}

CovMatrix limit_cov_matrix(std::span<const double> phis,
                           const QuadratureConfig& q) {
  if (phis.empty())
    throw std::invalid_argument("limit_cov_matrix: need at least one angle");
  CovMatrix m;
  m.dim = phis.size();
  m.data.assign(m.dim * m.dim, 0.0);
  const double diag = sigma_sq(q);
  for (std::size_t i = 0; i < m.dim; ++i) {
    m.at(i, i) = diag;
    for (std::size_t j = i + 1; j < m.dim; ++j) {
      double gap = std::abs(phis[i] - phis[j]);
      if (gap > kTau)
        throw std::invalid_argument(
            "limit_cov_matrix: angles must lie in [0, 2*pi]");
      const double v = (gap == 0.0) ? diag : cov_kernel(gap, q);
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  }
  return m;
}

}  // namespace polymax
