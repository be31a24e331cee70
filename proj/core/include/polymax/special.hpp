#ifndef POLYMAX_SPECIAL_HPP_
#define POLYMAX_SPECIAL_HPP_

namespace polymax {

// Clausen function Cl2(x) = -int_0^x log|2 sin(t/2)| dt = sum_k sin(kx)/k^2.
// Used as the exact antiderivative of log(2(1-cos)) in panel quadrature.
double clausen_cl2(double x);

// zeta(2m) for m >= 1, full double accuracy.
double zeta_even(unsigned m);

// Standard normal CDF and its scaled variant.
double normal_cdf(double x);
double normal_cdf(double x, double mean, double sd);

}  // namespace polymax

#endif  // POLYMAX_SPECIAL_HPP_
