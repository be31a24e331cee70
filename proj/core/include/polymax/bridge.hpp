#ifndef POLYMAX_BRIDGE_HPP_
#define POLYMAX_BRIDGE_HPP_

#include <cstddef>
#include <vector>

#include "polymax/rng.hpp"

namespace polymax {

// paper_bm_subtraction: W(psi) = B(psi) - (psi/2pi) B(2pi) with standard
//   Brownian increments, Var W(pi) = pi/2.
// unit_variance_normalized: the same path divided by sqrt(2pi), so that
//   Cov(W(s), W(t)) = (s^t)/(2pi) - st/(4pi^2) and Var W(pi) = 1/4; under
//   this scaling the integral functional has variance sigma^2, matching the
//   limit covariance of the scaled log magnitudes.
enum class BridgeScaling { PaperBmSubtraction, UnitVarianceNormalized };

const char* scaling_name(BridgeScaling s);

struct BridgePath {
  std::size_t grid_size = 0;   // M; values has M+1 entries on psi_j = 2pi j/M
  std::vector<double> values;  // values[0] == values[M] == 0 exactly
  SeedRecord seed;
  BridgeScaling scaling = BridgeScaling::UnitVarianceNormalized;

  double step() const;
  void validate() const;
};

struct IntegralConfig {
  enum class TailPolicy {
    Drop,            // integrate [eps, 2pi - eps] only
    AsymptoticBound  // add the boundary-term estimate of the tails
  };

  double trunc_eps = 6.283185307179586476925286766559e-4;  // 1e-4 * 2pi
  TailPolicy tail = TailPolicy::Drop;

  void validate() const;
};

// Exact Gaussian bridge marginals on the grid; endpoints exactly zero.
BridgePath sample_bridge(std::size_t M, BridgeScaling scaling, RngStream& rng);

// Wrap-around shift: result(theta) = W(phi + theta) - W(phi), cyclically.
// phi must sit on the path grid (tolerance 1e-9), otherwise throws.
BridgePath shift_path(const BridgePath& p, double phi);

// I_phi: integral of the piecewise-linear interpolant of the shifted path
// against g(psi) = sin psi / (1 - cos psi), computed exactly per panel from
// the antiderivatives of g and of log(2(1-cos)). phi must be grid-aligned.
double integral_I(const BridgePath& p, double phi,
                  const IntegralConfig& cfg = {});

// The truncated form [W_phi h]_eps^{2pi-eps} - int_eps^{2pi-eps} W_phi g,
// which tends to -I_phi as eps -> 0.
double integral_I_eps(const BridgePath& p, double phi, double eps);

// Precomputed panel weights turning the all-shifts scan into a circular
// correlation; reusable across paths with the same grid and config.
struct ShiftIntegralTable {
  std::size_t grid_size = 0;
  IntegralConfig cfg;
  std::vector<double> weights;  // index 0..M, entries 0 and M unused
  double weight_sum = 0.0;

  static ShiftIntegralTable build(std::size_t M, const IntegralConfig& cfg);
};

// I_phi for every grid-aligned phi_m = 2pi m / M, m = 0..M-1.
std::vector<double> integral_all_shifts(const BridgePath& p,
                                        const ShiftIntegralTable& table);
std::vector<double> integral_all_shifts(const BridgePath& p,
                                        const IntegralConfig& cfg = {});

struct MaxIResult {
  double phi_star = 0.0;
  double i_star = 0.0;
};

// I* = max over grid-aligned phi of I_phi (so i_star >= I_{phi=0}).
MaxIResult maximize_I(const BridgePath& p, const IntegralConfig& cfg = {});

}  // namespace polymax

#endif  // POLYMAX_BRIDGE_HPP_
