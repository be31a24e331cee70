#include "polymax/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "polymax/coupling.hpp"
#include "polymax/limitcov.hpp"
#include "polymax/parallel.hpp"
#include "polymax/special.hpp"

namespace polymax {

namespace {

using Clock = std::chrono::steady_clock;

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<std::uint64_t> derived_seeds(std::uint64_t master, std::size_t n) {
  std::vector<std::uint64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = derive_stream_seed(master, i);
  return out;
}

}  // namespace

double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  return d;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

Histogram histogram(std::span<const double> sample, std::size_t bins) {
  if (sample.empty()) throw std::invalid_argument("histogram: empty sample");
  if (bins == 0) throw std::invalid_argument("histogram: bins must be >= 1");
  double lo = sample[0], hi = sample[0];
  for (double v : sample) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    h.edges[i] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : sample) {
    auto idx = static_cast<std::size_t>((v - lo) / width);
    if (idx >= bins) idx = bins - 1;  // right-closed last bin
    ++h.counts[idx];
  }
  h.total = sample.size();
  return h;
}

double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("sample_mean: empty");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("sample_variance: n < 2");
  const double m = sample_mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / (static_cast<double>(xs.size()) - 1.0);
}

void RunReport::set_config(std::string key, std::string value) {
  config.emplace_back(std::move(key), std::move(value));
}
void RunReport::set_config(std::string key, double value) {
  config.emplace_back(std::move(key), format_double(value));
}
void RunReport::set_config(std::string key, std::uint64_t value) {
  config.emplace_back(std::move(key), std::to_string(value));
}
void RunReport::set_stat(std::string key, double value) {
  stats.emplace_back(std::move(key), value);
}

double RunReport::stat(const std::string& key) const {
  for (const auto& [k, v] : stats)
    if (k == key) return v;
  throw std::out_of_range("RunReport: no stat named " + key);
}

std::uint64_t RunReport::config_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x1f;
    h *= 0x100000001b3ULL;
  };
  mix(experiment);
  for (const auto& [k, v] : config) {
    mix(k);
    mix(v);
  }
  return h;
}

RunReport run_marginal_clt(const MultiplicitySpec& spec, std::size_t N,
                           std::size_t M, double psi,
                           std::uint64_t master_seed, unsigned threads) {
  const auto t0 = Clock::now();
  RunReport rep;
  rep.experiment = "marginal-clt";
  rep.master_seed = master_seed;
  rep.set_config("spec", spec.to_key_value());
  rep.set_config("N", static_cast<std::uint64_t>(N));
  rep.set_config("M", static_cast<std::uint64_t>(M));
  rep.set_config("psi", psi);
  rep.set_config("master_seed", master_seed);
  rep.replicate_seeds = derived_seeds(master_seed, M);

  auto& t = rep.samples["T"];
  t.resize(M);
  parallel_for(M, threads, [&](std::size_t i) {
    RngStream rng(master_seed, i);
    const auto s = sample_poly(spec, N, rng);
    t[i] = scaled_log_magnitude(s, psi);
  });

  const double sig2 = sigma_sq();
  const double sd = std::sqrt(sig2);
  rep.set_stat("mean", sample_mean(t));
  rep.set_stat("variance", sample_variance(t));
  rep.set_stat("sigma_sq", sig2);
  rep.set_stat("ks_normal",
               ks_statistic(t, [sd](double x) { return normal_cdf(x, 0, sd); }));
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return rep;
}

RunReport run_joint_cov(const MultiplicitySpec& spec, std::size_t N,
                        std::size_t M, double phi1, double phi2,
                        std::uint64_t master_seed, unsigned threads) {
  const auto t0 = Clock::now();
  RunReport rep;
  rep.experiment = "joint-cov";
  rep.master_seed = master_seed;
  rep.set_config("spec", spec.to_key_value());
  rep.set_config("N", static_cast<std::uint64_t>(N));
  rep.set_config("M", static_cast<std::uint64_t>(M));
  rep.set_config("phi1", phi1);
  rep.set_config("phi2", phi2);
  rep.set_config("master_seed", master_seed);
  rep.replicate_seeds = derived_seeds(master_seed, M);

  auto& t1 = rep.samples["T1"];
  auto& t2 = rep.samples["T2"];
  t1.resize(M);
  t2.resize(M);
  parallel_for(M, threads, [&](std::size_t i) {
    RngStream rng(master_seed, i);
    const auto s = sample_poly(spec, N, rng);
    t1[i] = scaled_log_magnitude(s, phi1);
    t2[i] = scaled_log_magnitude(s, phi2);
  });

  const double m1 = sample_mean(t1);
  const double m2 = sample_mean(t2);
  double c11 = 0.0, c22 = 0.0, c12 = 0.0, m22 = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const double a = t1[i] - m1;
    const double b = t2[i] - m2;
    c11 += a * a;
    c22 += b * b;
    c12 += a * b;
    m22 += a * a * b * b;
  }
  const double n = static_cast<double>(M);
  const double cov = c12 / (n - 1.0);
  // Asymptotic standard error of the sample covariance.
  const double se = std::sqrt(std::max(0.0, m22 / n - cov * cov) / n);
  const double gap = std::abs(phi1 - phi2);
  const double target = gap == 0.0 ? sigma_sq() : cov_kernel(gap);

  rep.set_stat("cov", cov);
  rep.set_stat("var1", c11 / (n - 1.0));
  rep.set_stat("var2", c22 / (n - 1.0));
  rep.set_stat("cov_se", se);
  rep.set_stat("K_target", target);
  rep.set_stat("cov_z", se > 0 ? (cov - target) / se : 0.0);
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return rep;
}

IstarRun run_istar(std::size_t n_paths, std::size_t grid,
                   BridgeScaling scaling, const IntegralConfig& cfg,
                   std::uint64_t master_seed, unsigned threads,
                   std::size_t hist_bins) {
  const auto t0 = Clock::now();
  cfg.validate();
  RunReport rep;
  rep.experiment = "istar-dist";
  rep.master_seed = master_seed;
  rep.set_config("paths", static_cast<std::uint64_t>(n_paths));
  rep.set_config("grid", static_cast<std::uint64_t>(grid));
  rep.set_config("scaling", scaling_name(scaling));
  rep.set_config("trunc_eps", cfg.trunc_eps);
  rep.set_config("tail_policy",
                 cfg.tail == IntegralConfig::TailPolicy::Drop
                     ? "drop"
                     : "asymptotic_bound");
  rep.set_config("master_seed", master_seed);
  rep.replicate_seeds = derived_seeds(master_seed, n_paths);

  const auto table = ShiftIntegralTable::build(grid, cfg);
  auto& istar = rep.samples["I_star"];
  auto& phistar = rep.samples["phi_star"];
  auto& fubini = rep.samples["fubini_ratio"];
  istar.resize(n_paths);
  phistar.resize(n_paths);
  fubini.resize(n_paths);
  parallel_for(n_paths, threads, [&](std::size_t i) {
    RngStream rng(master_seed, i);
    const auto path = sample_bridge(grid, scaling, rng);
    const auto all = integral_all_shifts(path, table);
    std::size_t best = 0;
    double mean = 0.0, peak = 0.0;
    for (std::size_t m = 0; m < all.size(); ++m) {
      if (all[m] > all[best]) best = m;
      mean += all[m];
      peak = std::max(peak, std::abs(all[m]));
    }
    mean /= static_cast<double>(all.size());
    istar[i] = all[best];
    phistar[i] = path.step() * static_cast<double>(best);
    fubini[i] = peak > 0 ? std::abs(mean) / peak : 0.0;
  });

  IstarRun out;
  out.hist = histogram(istar, hist_bins);
  double min_istar = istar[0], max_fubini = 0.0;
  for (std::size_t i = 0; i < n_paths; ++i) {
    min_istar = std::min(min_istar, istar[i]);
    max_fubini = std::max(max_fubini, fubini[i]);
  }
  rep.set_stat("mean_istar", sample_mean(istar));
  rep.set_stat("min_istar", min_istar);
  rep.set_stat("max_fubini_ratio", max_fubini);
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  out.report = std::move(rep);
  return out;
}

RunReport run_convergence(const MultiplicitySpec& spec,
                          std::span<const std::size_t> N_schedule,
                          std::size_t M, std::uint64_t master_seed,
                          std::span<const double> reference_istar,
                          unsigned threads) {
  const auto t0 = Clock::now();
  RunReport rep;
  rep.experiment = "convergence";
  rep.master_seed = master_seed;
  rep.set_config("spec", spec.to_key_value());
  rep.set_config("M", static_cast<std::uint64_t>(M));
  rep.set_config("master_seed", master_seed);
  {
    std::ostringstream os;
    for (std::size_t i = 0; i < N_schedule.size(); ++i) {
      if (i) os << ',';
      os << N_schedule[i];
    }
    rep.set_config("N_schedule", os.str());
  }
  rep.set_config("reference_size",
                 static_cast<std::uint64_t>(reference_istar.size()));
  rep.replicate_seeds = derived_seeds(master_seed, M);

  const std::vector<double> reference(reference_istar.begin(),
                                      reference_istar.end());
  for (std::size_t ni = 0; ni < N_schedule.size(); ++ni) {
    const std::size_t N = N_schedule[ni];
    const GridConfig grid = GridConfig::for_degree(N);
    auto& tstar = rep.samples["Tstar_N" + std::to_string(N)];
    tstar.resize(M);
    // Stream ids are offset per schedule entry so each (N, replicate) pair
    // draws an independent sample.
    const std::uint64_t base = static_cast<std::uint64_t>(ni) << 32;
    parallel_for(M, threads, [&](std::size_t i) {
      RngStream rng(master_seed, base + i);
      const auto s = sample_poly(spec, N, rng);
      tstar[i] = maximize(s, grid).t_star;
    });
    const std::string suffix = "_N" + std::to_string(N);
    double in_band = 0.0, min_t = tstar[0];
    for (double t : tstar) {
      if (t >= 1.0 && t <= 5.0) in_band += 1.0;
      min_t = std::min(min_t, t);
    }
    rep.set_stat("min_tstar" + suffix, min_t);
    rep.set_stat("band_fraction" + suffix,
                 in_band / static_cast<double>(M));
    rep.set_stat("s_N" + suffix, prefix_norms(spec, N).s());
    if (!reference.empty())
      rep.set_stat("ks" + suffix, ks_statistic(tstar, reference));
  }
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return rep;
}

}  // namespace polymax
