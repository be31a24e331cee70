#ifndef POLYMAX_POLYCIRCLE_HPP_
#define POLYMAX_POLYCIRCLE_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "polymax/multiplicity.hpp"
#include "polymax/rng.hpp"

namespace polymax {

inline constexpr double kTau = 6.283185307179586476925286766559;  // 2*pi

// Angular distance below which an evaluation point counts as colliding
// with a root.
inline constexpr double kMinRootDistance = 1e-12;

// One realization of P_N(z) = prod (z - e^{i theta_k})^{n_k}.
struct PolySample {
  std::vector<double> angles;        // theta_k in [0, 2*pi)
  std::vector<std::uint64_t> mults;  // n_k >= 1
  PrefixNorms norms;                 // for the same N
  SeedRecord seed;

  std::size_t size() const { return angles.size(); }
  void validate() const;
};

// Circle discretization used by the maximizer: a uniform base grid plus
// golden-section refinement of the best brackets, keeping clear of roots.
struct GridConfig {
  std::size_t base_points = 4096;  // >= 1024
  std::size_t refine_iters = 32;   // refinement evaluations per bracket
  double exclusion = kTau / 8192;  // >= pi/base_points, enforced
  double origin = 0.0;             // grid rotation, for equivariance checks

  static GridConfig for_degree(std::size_t N);
  void validate() const;
};

PolySample sample_poly(const MultiplicitySpec& spec, std::size_t N,
                       RngStream& rng);

// h(psi) = log(2(1 - cos psi)) = log|e^{i psi} - 1|^2.
// Throws std::domain_error when psi == 0 (mod 2*pi).
double log_kernel(double psi);

// L_N(psi) = sum_k n_k h(psi - theta_k). Throws std::domain_error when psi
// falls within kMinRootDistance of a root.
double log_magnitude(const PolySample& s, double psi);

// T_N(psi) = L_N(psi) / s_N.
double scaled_log_magnitude(const PolySample& s, double psi);

struct MaxResult {
  double psi_star = 0.0;
  double t_star = 0.0;
  std::size_t skipped_points = 0;  // singular grid points skipped
};

// Maximizes T_N over the base grid, then refines the best brackets.
// t_star never decreases when refine_iters grows or base_points doubles.
MaxResult maximize(const PolySample& s, const GridConfig& cfg);

}  // namespace polymax

#endif  // POLYMAX_POLYCIRCLE_HPP_
