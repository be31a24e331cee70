#ifndef POLYMAX_LIMITCOV_HPP_
#define POLYMAX_LIMITCOV_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "polymax/quadrature.hpp"

namespace polymax {

// sigma^2 = (1/2pi) int_0^{2pi} h^2(psi) dpsi, h = log(2(1-cos)).
double sigma_sq(const QuadratureConfig& q = {});

// K(theta) = (1/2pi) int_0^{2pi} h(psi) h(psi + theta) dpsi, theta in [0,2pi].
// K(0) = sigma^2; K is symmetric about pi.
double cov_kernel(double theta, const QuadratureConfig& q = {});

struct CovMatrix {
  std::size_t dim = 0;
  std::vector<double> data;  // row-major dim x dim

  double& at(std::size_t i, std::size_t j) { return data[i * dim + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * dim + j]; }
};

// Limit Gaussian covariance of (T_N(phi_1), ..., T_N(phi_s)):
// Sigma_{k,l} = K(|phi_k - phi_l|).
CovMatrix limit_cov_matrix(std::span<const double> phis,
                           const QuadratureConfig& q = {});

}  // namespace polymax

#endif  // POLYMAX_LIMITCOV_HPP_
