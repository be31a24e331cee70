#ifndef POLYMAX_COUPLING_HPP_
#define POLYMAX_COUPLING_HPP_

#include <cstddef>
#include <vector>

#include "polymax/polycircle.hpp"
#include "polymax/quadrature.hpp"

namespace polymax {

// Cycled weighted empirical distribution of the root angles re-based at phi:
// mass n_q/s_N at position (theta_q - phi) mod 2*pi.
struct WeightedEcdf {
  double base_phi = 0.0;
  std::vector<double> positions;  // sorted, in [0, 2*pi)
  std::vector<double> masses;     // n_q/s_N, aligned with positions
  std::vector<double> cumulative;
  PrefixNorms norms;

  // F(psi): right-continuous, mass of positions <= psi.
  double value(double psi) const;
  double total_mass() const;  // M_N / s_N
};

WeightedEcdf cycled_ecdf(const PolySample& s, double phi);

// W_{N,phi}(psi) = F_{N,phi}(psi) - (M_N/s_N) psi/(2*pi);
// vanishes at 0 and 2*pi and has mean zero at every psi.
double centered_process(const PolySample& s, double phi, double psi);

// mu_eps = (1/pi) int_0^eps h(psi) dpsi  (negative for small eps).
double mu_eps(double eps, const QuadratureConfig& q = {});

// sigma_sq_eps = (1/pi) int_0^eps h^2(psi) dpsi - mu_eps^2.
double sigma_sq_eps(double eps, const QuadratureConfig& q = {});

// Near-root sum: sum over roots within angular distance eps of phi of
// (n_q/s_N) h(phi - theta_q), minus the compensator (M_N/s_N) mu_eps.
// Throws std::domain_error for a root exactly at phi and std::domain_error
// for a root exactly on the truncation boundary.
double z_near(const PolySample& s, double phi, double eps);

// Truncated statistic via exact Stieltjes integration by parts:
// [h W_{N,phi}]_eps^{2pi-eps} - int_eps^{2pi-eps} W_{N,phi} g, evaluated
// with h as the antiderivative of g over the constancy intervals of F, plus
// the drift term, so that T_N(phi) = t_eps_byparts + z_near holds exactly.
double t_eps_byparts(const PolySample& s, double phi, double eps);

}  // namespace polymax

#endif  // POLYMAX_COUPLING_HPP_
