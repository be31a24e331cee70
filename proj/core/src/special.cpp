#include "polymax/special.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace polymax {

namespace {
constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kTwoPi = 2.0 * kPi;

// Euler-Maclaurin tail for zeta(s), s >= 2; error is far below 1 ulp at K=256.
double zeta_em(double s) {
  constexpr int K = 256;
  double sum = 0.0;
  for (int k = K - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
  const double Ks = std::pow(static_cast<double>(K), -s);
  sum += Ks * K / (s - 1.0);
  sum += 0.5 * Ks;
  sum += s * Ks / K / 12.0;
  sum -= s * (s + 1.0) * (s + 2.0) * Ks / (K * K * K) / 720.0;
  return sum;
}

constexpr int kZetaTerms = 40;

const std::array<double, kZetaTerms + 1>& zeta_table() {
  static const std::array<double, kZetaTerms + 1> table = [] {
    std::array<double, kZetaTerms + 1> t{};
    for (int m = 1; m <= kZetaTerms; ++m) t[m] = zeta_em(2.0 * m);
    return t;
  }();
  return table;
}
}  // namespace

double zeta_even(unsigned m) {
  if (m == 0) throw std::domain_error("zeta_even: m must be >= 1");
  if (m <= kZetaTerms) return zeta_table()[m];
  return 1.0;  // zeta(2m) - 1 < 2^-80 here
}

double clausen_cl2(double x) {
  // Reduce to [-pi, pi]; Cl2 is odd and 2*pi-periodic.
  double r = std::remainder(x, kTwoPi);
  double sign = 1.0;
  if (r < 0) {
    r = -r;
    sign = -1.0;
  }
  if (r == 0.0) return 0.0;
  // Cl2(r) = r - r log r + r * sum_m zeta(2m)/(m(2m+1)) (r/2pi)^(2m).
  // The ratio (r/2pi)^2 <= 1/4 on [0, pi], so ~30 terms suffice.
  const double q = r / kTwoPi;
  const double q2 = q * q;
  double pw = q2;
  double sum = 0.0;
  for (int m = 1; m <= kZetaTerms; ++m) {
    const double term = zeta_table()[m] / (m * (2.0 * m + 1.0)) * pw;
    sum += term;
    if (term < 1e-19) break;
    pw *= q2;
  }
  return sign * (r - r * std::log(r) + r * sum);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_cdf(double x, double mean, double sd) {
  return normal_cdf((x - mean) / sd);
}

}  // namespace polymax
