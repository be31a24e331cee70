#include "polymax/bridge.hpp"

#include <cmath>
#include <stdexcept>

#include "polymax/polycircle.hpp"
#include "polymax/special.hpp"

namespace polymax {

namespace {

constexpr double kPi = 0.5 * kTau;

inline double h_raw(double psi) {
  return 2.0 * std::log(2.0 * std::abs(std::sin(0.5 * psi)));
}

std::size_t shift_index(const BridgePath& p, double phi) {
  const double step = p.step();
  const double idx = phi / step;
  const auto m = static_cast<long long>(std::llround(idx));
  if (std::abs(phi - static_cast<double>(m) * step) > 1e-9)
    throw std::invalid_argument(
        "bridge: phi is not aligned to the path grid");
  const auto M = static_cast<long long>(p.grid_size);
  return static_cast<std::size_t>(((m % M) + M) % M);
}

// Clipped-panel primitives over [eps, 2pi - eps]:
//   P_j = int g, Q_j = int (theta - theta_j) g over panel j's clipped part.
struct PanelTable {
  std::size_t M = 0;
  double eps = 0.0;
  std::vector<double> P;  // size M
  std::vector<double> Q;  // size M
  // interpolation anchors for the boundary term
  std::size_t jl = 0, jr = 0;
  double tl = 0.0, tr = 0.0;
  double h_eps_left = 0.0, h_eps_right = 0.0;

  PanelTable(std::size_t M_, double eps_) : M(M_), eps(eps_) {
    const double step = kTau / static_cast<double>(M);
    const double lo = eps;
    const double hi = kTau - eps;
    P.assign(M, 0.0);
    Q.assign(M, 0.0);
    for (std::size_t j = 0; j < M; ++j) {
      const double t0 = step * static_cast<double>(j);
      const double t1 =
          (j + 1 == M) ? kTau : step * static_cast<double>(j + 1);
      const double c0 = std::max(t0, lo);
      const double c1 = std::min(t1, hi);
      if (c0 >= c1) continue;
      const double h0 = h_raw(c0);
      const double h1 = h_raw(c1);
      P[j] = h1 - h0;
      Q[j] = (c1 - t0) * h1 - (c0 - t0) * h0 +
             2.0 * (clausen_cl2(c1) - clausen_cl2(c0));
    }
    jl = static_cast<std::size_t>(lo / step);
    jr = static_cast<std::size_t>(hi / step);
    if (jr >= M) jr = M - 1;
    tl = lo / step - static_cast<double>(jl);
    tr = hi / step - static_cast<double>(jr);
    h_eps_left = h_raw(lo);
    h_eps_right = h_raw(hi);
  }
};

// Sum of the clipped-panel integrals for the (already shifted) value array
// v[0..M], v[0] == v[M] == 0.
double panel_sum(const std::vector<double>& v, const PanelTable& t) {
  const double inv_step = static_cast<double>(t.M) / kTau;
  double sum = 0.0, comp = 0.0;
  for (std::size_t j = 0; j < t.M; ++j) {
    if (t.P[j] == 0.0 && t.Q[j] == 0.0) continue;
    const double term =
        v[j] * t.P[j] + (v[j + 1] - v[j]) * t.Q[j] * inv_step;
    const double s = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - s) + term;
    else
      comp += (term - s) + sum;
    sum = s;
  }
  return sum + comp;
}

// Interpolated shifted-path values at eps and 2pi - eps, and the boundary
// term [v h]_eps^{2pi-eps}.
double boundary_term(const std::vector<double>& v, const PanelTable& t) {
  const double v_left = v[t.jl] + (v[t.jl + 1] - v[t.jl]) * t.tl;
  const double v_right = v[t.jr] + (v[t.jr + 1] - v[t.jr]) * t.tr;
  return t.h_eps_right * v_right - t.h_eps_left * v_left;
}

std::vector<double> shifted_values(const BridgePath& p, std::size_t m) {
  const std::size_t M = p.grid_size;
  std::vector<double> v(M + 1);
  const double base = p.values[m];
  for (std::size_t j = 0; j <= M; ++j) {
    const std::size_t idx = (m + j) % M;
    v[j] = p.values[idx] - base;
  }
  v[0] = 0.0;
  v[M] = 0.0;
  return v;
}

}  // namespace

const char* scaling_name(BridgeScaling s) {
  return s == BridgeScaling::PaperBmSubtraction ? "paper_bm_subtraction"
                                                : "unit_variance_normalized";
}

double BridgePath::step() const {
  return kTau / static_cast<double>(grid_size);
}

void BridgePath::validate() const {
  if (grid_size < 2 || values.size() != grid_size + 1)
    throw std::invalid_argument("BridgePath: inconsistent grid");
  if (values.front() != 0.0 || values.back() != 0.0)
    throw std::invalid_argument("BridgePath: endpoints must be exactly 0");
}

void IntegralConfig::validate() const {
  if (!(trunc_eps > 0.0) || !(trunc_eps < kPi / 4.0))
    throw std::invalid_argument(
        "IntegralConfig: trunc_eps must lie in (0, pi/4)");
}

BridgePath sample_bridge(std::size_t M, BridgeScaling scaling,
                         RngStream& rng) {
  if (M < 2) throw std::invalid_argument("sample_bridge: M must be >= 2");
  BridgePath p;
  p.grid_size = M;
  p.scaling = scaling;
  p.seed = rng.seed();
  p.values.resize(M + 1);
  const double sqrt_step = std::sqrt(kTau / static_cast<double>(M));
  double b = 0.0;
  p.values[0] = 0.0;
  for (std::size_t j = 1; j <= M; ++j) {
    b += sqrt_step * rng.next_gaussian();
    p.values[j] = b;
  }
  const double b_end = p.values[M];
  const double inv_m = 1.0 / static_cast<double>(M);
  const double norm =
      scaling == BridgeScaling::UnitVarianceNormalized ? 1.0 / std::sqrt(kTau)
                                                       : 1.0;
  for (std::size_t j = 1; j < M; ++j)
    p.values[j] =
        norm * (p.values[j] - static_cast<double>(j) * inv_m * b_end);
  p.values[M] = 0.0;
  return p;
}

BridgePath shift_path(const BridgePath& p, double phi) {
  p.validate();
  const std::size_t m = shift_index(p, phi);
  BridgePath out;
  out.grid_size = p.grid_size;
  out.scaling = p.scaling;
  out.seed = p.seed;
  out.values = shifted_values(p, m);
  return out;
}

double integral_I(const BridgePath& p, double phi, const IntegralConfig& cfg) {
  p.validate();
  cfg.validate();
  const std::size_t m = shift_index(p, phi);
  const PanelTable table(p.grid_size, cfg.trunc_eps);
  const auto v = shifted_values(p, m);
  double result = panel_sum(v, table);
  if (cfg.tail == IntegralConfig::TailPolicy::AsymptoticBound)
    result -= boundary_term(v, table);
  return result;
}

double integral_I_eps(const BridgePath& p, double phi, double eps) {
  p.validate();
  if (!(eps > 0.0) || !(eps < kPi / 4.0))
    throw std::invalid_argument("integral_I_eps: eps must lie in (0, pi/4)");
  const std::size_t m = shift_index(p, phi);
  const PanelTable table(p.grid_size, eps);
  const auto v = shifted_values(p, m);
  return boundary_term(v, table) - panel_sum(v, table);
}

ShiftIntegralTable ShiftIntegralTable::build(std::size_t M,
                                             const IntegralConfig& cfg) {
  cfg.validate();
  if (M < 2) throw std::invalid_argument("ShiftIntegralTable: M must be >= 2");
  const PanelTable t(M, cfg.trunc_eps);
  ShiftIntegralTable out;
  out.grid_size = M;
  out.cfg = cfg;
  out.weights.assign(M + 1, 0.0);
  const double inv_step = static_cast<double>(M) / kTau;
  // I = sum_j v_j P_j + (v_{j+1} - v_j) Q_j / step
  //   = sum_j v_j (P_j - Q_j/step + Q_{j-1}/step), with v_0 = v_M = 0.
  for (std::size_t j = 0; j < M; ++j) {
    out.weights[j] += t.P[j] - t.Q[j] * inv_step;
    out.weights[j + 1] += t.Q[j] * inv_step;
  }
  if (cfg.tail == IntegralConfig::TailPolicy::AsymptoticBound) {
    // subtract [v h]: coefficients of the interpolated boundary values
    out.weights[t.jl] += t.h_eps_left * (1.0 - t.tl);
    out.weights[t.jl + 1] += t.h_eps_left * t.tl;
    out.weights[t.jr] -= t.h_eps_right * (1.0 - t.tr);
    out.weights[t.jr + 1] -= t.h_eps_right * t.tr;
  }
  out.weights[0] = 0.0;
  out.weights[M] = 0.0;
  double sum = 0.0;
  for (std::size_t j = 1; j < M; ++j) sum += out.weights[j];
  out.weight_sum = sum;
  return out;
}

std::vector<double> integral_all_shifts(const BridgePath& p,
                                        const ShiftIntegralTable& table) {
  p.validate();
  if (table.grid_size != p.grid_size)
    throw std::invalid_argument("integral_all_shifts: table grid mismatch");
  const std::size_t M = p.grid_size;
  const double* w = table.weights.data();
  const double* vals = p.values.data();
  std::vector<double> out(M);
  for (std::size_t m = 0; m < M; ++m) {
    double acc = 0.0;
    const std::size_t wrap = M - m;
    for (std::size_t j = 1; j < wrap; ++j) acc += vals[m + j] * w[j];
    for (std::size_t j = wrap; j < M; ++j) acc += vals[m + j - M] * w[j];
    out[m] = acc - vals[m] * table.weight_sum;
  }
  return out;
}

std::vector<double> integral_all_shifts(const BridgePath& p,
                                        const IntegralConfig& cfg) {
  return integral_all_shifts(p, ShiftIntegralTable::build(p.grid_size, cfg));
}

MaxIResult maximize_I(const BridgePath& p, const IntegralConfig& cfg) {
  const auto all = integral_all_shifts(p, cfg);
  std::size_t best = 0;
  for (std::size_t m = 1; m < all.size(); ++m)
    if (all[m] > all[best]) best = m;
  MaxIResult out;
  out.phi_star = p.step() * static_cast<double>(best);
  out.i_star = all[best];
  return out;
}

}  // namespace polymax
