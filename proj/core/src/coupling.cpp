#include "polymax/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace polymax {

namespace {

constexpr double kPi = 0.5 * kTau;

inline double h_raw(double psi) {
  return 2.0 * std::log(2.0 * std::abs(std::sin(0.5 * psi)));
}

inline double wrap_positive(double x) {
  double r = std::fmod(x, kTau);
  if (r < 0) r += kTau;
  if (r >= kTau) r = 0.0;
  return r;
}

struct WrappedRoot {
  double position;  // (theta - phi) mod 2*pi, sorting key
  double dist;      // |remainder(phi - theta, 2*pi)|, circle distance
  double h;         // h evaluated exactly as log_magnitude does
  double mass;      // n/s_N
};

// The h values must match log_magnitude bit-for-bit, otherwise near-root
// terms spoil the exact decomposition; so reuse the same wrapped argument.
std::vector<WrappedRoot> wrap_roots(const PolySample& s, double phi) {
  const double sN = s.norms.s();
  std::vector<WrappedRoot> out(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double d = std::remainder(phi - s.angles[k], kTau);
    WrappedRoot r;
    r.position = wrap_positive(s.angles[k] - phi);
    r.dist = std::abs(d);
    r.h = 2.0 * std::log(2.0 * std::abs(std::sin(0.5 * d)));
    r.mass = static_cast<double>(s.mults[k]) / sN;
    out[k] = r;
  }
  return out;
}

struct KahanSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      c += (sum - t) + v;
    else
      c += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace

double WeightedEcdf::value(double psi) const {
  const auto it =
      std::upper_bound(positions.begin(), positions.end(), psi);
  const std::size_t n = static_cast<std::size_t>(it - positions.begin());
  return n == 0 ? 0.0 : cumulative[n - 1];
}

double WeightedEcdf::total_mass() const {
  return cumulative.empty() ? 0.0 : cumulative.back();
}

WeightedEcdf cycled_ecdf(const PolySample& s, double phi) {
  s.validate();
  WeightedEcdf e;
  e.base_phi = phi;
  e.norms = s.norms;
  auto roots = wrap_roots(s, phi);
  std::sort(roots.begin(), roots.end(),
            [](const WrappedRoot& a, const WrappedRoot& b) {
              return a.position < b.position;
            });
  e.positions.resize(roots.size());
  e.masses.resize(roots.size());
  e.cumulative.resize(roots.size());
  long double run = 0.0L;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    e.positions[i] = roots[i].position;
    e.masses[i] = roots[i].mass;
    run += roots[i].mass;
    e.cumulative[i] = static_cast<double>(run);
  }
  return e;
}

double centered_process(const PolySample& s, double phi, double psi) {
  if (!(psi >= 0.0) || !(psi <= kTau))
    throw std::invalid_argument("centered_process: psi must lie in [0, 2*pi]");
  const auto e = cycled_ecdf(s, phi);
  return e.value(psi) - e.total_mass() * (psi / kTau);
}

double mu_eps(double eps, const QuadratureConfig& q) {
  if (!(eps > 0.0) || !(eps <= kTau))
    throw std::invalid_argument("mu_eps: eps must lie in (0, 2*pi]");
  return integrate_log_singular([](double x) { return h_raw(x); }, 0.0, eps,
                                true, false, q) /
         kPi;
}

double sigma_sq_eps(double eps, const QuadratureConfig& q) {
  if (!(eps > 0.0) || !(eps <= kTau))
    throw std::invalid_argument("sigma_sq_eps: eps must lie in (0, 2*pi]");
  const double second =
      integrate_log_singular(
          [](double x) {
            const double h = h_raw(x);
            return h * h;
          },
          0.0, eps, true, false, q) /
      kPi;
  const double mu = mu_eps(eps, q);
  return std::max(0.0, second - mu * mu);
}

double z_near(const PolySample& s, double phi, double eps) {
  s.validate();
  if (!(eps > 0.0) || !(eps < kPi / 4.0))
    throw std::invalid_argument("z_near: eps must lie in (0, pi/4)");
  const auto roots = wrap_roots(s, phi);
  KahanSum sum;
  for (const auto& r : roots) {
    if (r.dist == 0.0)
      throw std::domain_error("z_near: a root coincides with phi");
    if (r.dist == eps)
      throw std::domain_error("z_near: root exactly on the eps boundary");
    if (r.dist < eps) sum.add(r.mass * r.h);
  }
  const double c = s.norms.total() / s.norms.s();
  return sum.value() - c * mu_eps(eps);
}

double t_eps_byparts(const PolySample& s, double phi, double eps) {
  s.validate();
  if (!(eps > 0.0) || !(eps < kPi / 4.0))
    throw std::invalid_argument("t_eps_byparts: eps must lie in (0, pi/4)");
  auto roots = wrap_roots(s, phi);
  double mass_left = 0.0;   // roots at circle distance < eps, position side 0+
  double mass_right = 0.0;  // same, position side 2*pi-
  std::vector<WrappedRoot> far;
  far.reserve(roots.size());
  for (const auto& r : roots) {
    if (r.dist == eps)
      throw std::domain_error(
          "t_eps_byparts: root exactly on the truncation boundary");
    if (r.dist < eps) {
      if (r.position < kPi)
        mass_left += r.mass;
      else
        mass_right += r.mass;
    } else {
      far.push_back(r);
    }
  }
  std::sort(far.begin(), far.end(),
            [](const WrappedRoot& a, const WrappedRoot& b) {
              return a.position < b.position;
            });

  const double c = s.norms.total() / s.norms.s();
  const double h_l = h_raw(eps);
  const double h_r = h_raw(kTau - eps);
  const double f_left = mass_left;  // F(eps)
  double total = mass_left + mass_right;
  for (const auto& r : far) total += r.mass;
  const double f_right = total - mass_right;  // F(2*pi - eps)

  const double w_l = f_left - c * (eps / kTau);
  const double w_r = f_right - c * ((kTau - eps) / kTau);
  const double boundary = h_r * w_r - h_l * w_l;

  // int_eps^{2pi-eps} F dh over the constancy intervals of F.
  KahanSum f_part;
  double f_run = f_left;
  double h_prev = h_l;
  for (const auto& r : far) {
    f_part.add(f_run * (r.h - h_prev));
    f_run += r.mass;
    h_prev = r.h;
  }
  f_part.add(f_run * (h_r - h_prev));

  // Drift: +(c/2pi) int_eps^{2pi-eps} psi g(psi) dpsi, by parts with
  // int h over the truncation window written through mu_eps.
  const double drift =
      (c / kTau) * ((kTau - eps) * h_r - eps * h_l) + c * mu_eps(eps);

  return boundary - f_part.value() + drift;
}

}  // namespace polymax
