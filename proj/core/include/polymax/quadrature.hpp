#ifndef POLYMAX_QUADRATURE_HPP_
#define POLYMAX_QUADRATURE_HPP_

#include <cstddef>
#include <functional>

namespace polymax {

struct QuadratureConfig {
  // Absolute tolerance on the returned integral.
  double abs_tol = 1e-10;
  // Cap on uniform panels in the regular region before giving up.
  std::size_t max_panels = 1u << 16;
  // Fraction of the interval peeled off at a singular endpoint and covered
  // by geometrically shrinking panels instead of uniform ones.
  double endpoint_split = 0.1;

  void validate() const;
};

// Integrates f over [a, b] where f may have an integrable logarithmic
// singularity at either endpoint. Singular ends are covered by a fixed
// geometric panel stack (ratio 1/2, depth 54, 16-point Gauss-Legendre per
// panel); the regular region uses uniform Gauss-Legendre panels, doubled
// until two successive refinements agree to abs_tol.
// Throws std::runtime_error if the tolerance is not reached.
double integrate_log_singular(const std::function<double(double)>& f, double a,
                              double b, bool singular_a, bool singular_b,
                              const QuadratureConfig& cfg = {});

}  // namespace polymax

#endif  // POLYMAX_QUADRATURE_HPP_
