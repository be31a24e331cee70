#include "polymax/polycircle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polymax {

namespace {

constexpr double kPi = 0.5 * kTau;
constexpr double kLn2 = 0.6931471805599453094172321;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double wrap_signed(double x) {
  // remainder gives [-pi, pi]
  return std::remainder(x, kTau);
}

inline double wrap_positive(double x) {
  double r = std::fmod(x, kTau);
  if (r < 0) r += kTau;
  if (r >= kTau) r = 0.0;
  return r;
}

// Compensated (Neumaier) accumulator; keeps the exact-decomposition tests
// at the 1e-10 level independent of N.
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

// Fast L_N over many points for the common all-unit-multiplicities case:
// accumulate the product of 2|sin((psi-theta)/2)| with periodic exponent
// extraction instead of a log per root.
class Evaluator {
 public:
  explicit Evaluator(const PolySample& s) : s_(s) {
    all_unit_ = std::all_of(s.mults.begin(), s.mults.end(),
                            [](std::uint64_t m) { return m == 1; });
    sorted_ = s.angles;
    std::sort(sorted_.begin(), sorted_.end());
  }

  // Returns L_N(psi), or -inf when psi is within kMinRootDistance of a root.
  double operator()(double psi) const {
    constexpr double kGuard = 0.5 * kMinRootDistance;  // on |sin(d/2)|
    if (all_unit_) {
      double acc = 1.0;
      long ebits = 0;
      std::size_t k = 0;
      const std::size_t n = s_.angles.size();
      const double* th = s_.angles.data();
      for (; k + 4 <= n; k += 4) {
        const double s0 = std::sin(0.5 * (psi - th[k]));
        const double s1 = std::sin(0.5 * (psi - th[k + 1]));
        const double s2 = std::sin(0.5 * (psi - th[k + 2]));
        const double s3 = std::sin(0.5 * (psi - th[k + 3]));
        const double p = (s0 * s1) * (s2 * s3);
        if (std::abs(s0) < kGuard || std::abs(s1) < kGuard ||
            std::abs(s2) < kGuard || std::abs(s3) < kGuard)
          return kNegInf;
        acc *= p;
        int e;
        acc = std::frexp(acc, &e);
        ebits += e;
      }
      for (; k < n; ++k) {
        const double sk = std::sin(0.5 * (psi - th[k]));
        if (std::abs(sk) < kGuard) return kNegInf;
        acc *= sk;
      }
      int e;
      acc = std::frexp(acc, &e);
      ebits += e;
      // prod (2|sin|)^2 = 2^(2N) * acc^2 * 2^(2 ebits)
      return 2.0 * (std::log(std::abs(acc)) +
                    (static_cast<double>(ebits) + static_cast<double>(n)) *
                        kLn2);
    }
    KahanSum acc;
    for (std::size_t k = 0; k < s_.angles.size(); ++k) {
      const double d = wrap_signed(psi - s_.angles[k]);
      const double sk = std::abs(std::sin(0.5 * d));
      if (sk < kGuard) return kNegInf;
      acc.add(static_cast<double>(s_.mults[k]) * 2.0 * std::log(2.0 * sk));
    }
    return acc.value();
  }

  double nearest_root_distance(double psi) const {
    const double p = wrap_positive(psi);
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), p);
    double best = kTau;
    auto consider = [&](double theta) {
      best = std::min(best, std::abs(wrap_signed(p - theta)));
    };
    if (it != sorted_.end()) consider(*it);
    if (it != sorted_.begin()) consider(*(it - 1));
    consider(sorted_.front());
    consider(sorted_.back());
    return best;
  }

 private:
  const PolySample& s_;
  std::vector<double> sorted_;
  bool all_unit_;
};

}  // namespace

void PolySample::validate() const {
  if (angles.empty() || angles.size() != mults.size() ||
      norms.count != angles.size())
    throw std::invalid_argument("PolySample: inconsistent sizes");
  for (double a : angles)
    if (!(a >= 0.0) || a >= kTau)
      throw std::invalid_argument("PolySample: angle outside [0, 2*pi)");
  for (auto m : mults)
    if (m == 0) throw std::invalid_argument("PolySample: multiplicity 0");
}

GridConfig GridConfig::for_degree(std::size_t N) {
  GridConfig g;
  g.base_points = std::max<std::size_t>(4096, 8 * N);
  g.exclusion = kPi / static_cast<double>(g.base_points);
  return g;
}

void GridConfig::validate() const {
  if (base_points < 1024)
    throw std::invalid_argument("GridConfig: base_points must be >= 1024");
  if (!(exclusion > 0.0) ||
      exclusion < kPi / static_cast<double>(base_points))
    throw std::invalid_argument(
        "GridConfig: exclusion below pi/base_points is forbidden");
}

PolySample sample_poly(const MultiplicitySpec& spec, std::size_t N,
                       RngStream& rng) {
  if (N == 0) throw std::invalid_argument("sample_poly: N must be >= 1");
  PolySample s;
  s.seed = rng.seed();
  s.norms = prefix_norms(spec, N);
  s.angles.resize(N);
  s.mults.resize(N);
  for (std::size_t k = 0; k < N; ++k) {
    s.angles[k] = rng.next_angle();
    s.mults[k] = spec.term(k + 1);
  }
  return s;
}

double log_kernel(double psi) {
  const double d = wrap_signed(psi);
  const double sk = std::sin(0.5 * d);
  if (sk == 0.0)
    throw std::domain_error("log_kernel: psi == 0 (mod 2*pi) is singular");
  return 2.0 * std::log(2.0 * std::abs(sk));
}

double log_magnitude(const PolySample& s, double psi) {
  KahanSum acc;
  for (std::size_t k = 0; k < s.angles.size(); ++k) {
    const double d = wrap_signed(psi - s.angles[k]);
    if (std::abs(d) < kMinRootDistance)
      throw std::domain_error(
          "log_magnitude: psi collides with a root angle");
    acc.add(static_cast<double>(s.mults[k]) * 2.0 *
            std::log(2.0 * std::abs(std::sin(0.5 * d))));
  }
  return acc.value();
}

double scaled_log_magnitude(const PolySample& s, double psi) {
  return log_magnitude(s, psi) / s.norms.s();
}

MaxResult maximize(const PolySample& s, const GridConfig& cfg) {
  cfg.validate();
  const Evaluator eval(s);
  const std::size_t G = cfg.base_points;
  const double step = kTau / static_cast<double>(G);

  std::vector<double> vals(G);
  std::size_t skipped = 0;
  for (std::size_t j = 0; j < G; ++j) {
    const double v = eval(cfg.origin + step * static_cast<double>(j));
    vals[j] = v;
    if (v == kNegInf) ++skipped;
  }

  // Local maxima of the grid scan, best first.
  std::vector<std::size_t> candidates;
  for (std::size_t j = 0; j < G; ++j) {
    const double prev = vals[(j + G - 1) % G];
    const double next = vals[(j + 1) % G];
    if (vals[j] != kNegInf && vals[j] >= prev && vals[j] >= next)
      candidates.push_back(j);
  }
  if (candidates.empty())
    throw std::runtime_error("maximize: every grid point was singular");
  std::sort(candidates.begin(), candidates.end(),
            [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  constexpr std::size_t kBrackets = 8;
  if (candidates.size() > kBrackets) candidates.resize(kBrackets);

  // Base-grid maximum counts as-is; the exclusion zone only constrains
  // refinement probes.
  double best_psi = 0.0;
  double best_val = kNegInf;
  for (std::size_t j = 0; j < G; ++j) {
    if (vals[j] > best_val) {
      best_val = vals[j];
      best_psi = cfg.origin + step * static_cast<double>(j);
    }
  }

  auto exact_probe = [&](double psi) {
    if (eval.nearest_root_distance(psi) < cfg.exclusion) {
      ++skipped;
      return kNegInf;
    }
    const double v = eval(psi);
    if (v > best_val) {
      best_val = v;
      best_psi = psi;
    }
    return v;
  };

  constexpr double kInvPhi = 0.6180339887498948482;
  for (std::size_t j : candidates) {
    if (cfg.refine_iters == 0) continue;
    double a = cfg.origin + step * (static_cast<double>(j) - 1.0);
    double b = cfg.origin + step * (static_cast<double>(j) + 1.0);
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = exact_probe(x1);
    double f2 = exact_probe(x2);
    for (std::size_t it = 2; it < cfg.refine_iters; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kInvPhi * (b - a);
        f2 = exact_probe(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kInvPhi * (b - a);
        f1 = exact_probe(x1);
      }
    }
  }

  MaxResult out;
  out.psi_star = wrap_positive(best_psi);
  out.t_star = best_val / s.norms.s();
  out.skipped_points = skipped;
  return out;
}

}  // namespace polymax
