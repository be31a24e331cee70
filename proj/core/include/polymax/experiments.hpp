#ifndef POLYMAX_EXPERIMENTS_HPP_
#define POLYMAX_EXPERIMENTS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polymax/bridge.hpp"
#include "polymax/multiplicity.hpp"
#include "polymax/polycircle.hpp"

namespace polymax {

// ---------------------------------------------------------------------------
// Statistics toolbox

// Sup-distance between the empirical CDF of `sample` and an analytic CDF.
double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf);

// Two-sample sup-distance.
double ks_statistic(std::vector<double> a, std::vector<double> b);

struct Histogram {
  std::vector<double> edges;        // bins + 1, strictly increasing
  std::vector<std::size_t> counts;  // size bins
  std::size_t total = 0;
};

// Uniform bins spanning [min, max] of the sample (widened when degenerate);
// the last bin is right-closed. Throws on an empty sample.
Histogram histogram(std::span<const double> sample, std::size_t bins);

double sample_mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // unbiased

// ---------------------------------------------------------------------------
// Run reports

struct RunReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config;  // echoed settings
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> replicate_seeds;
  std::map<std::string, std::vector<double>> samples;
  std::vector<std::pair<std::string, double>> stats;
  double wall_seconds = 0.0;

  void set_config(std::string key, std::string value);
  void set_config(std::string key, double value);
  void set_config(std::string key, std::uint64_t value);
  void set_stat(std::string key, double value);
  double stat(const std::string& key) const;  // throws if missing

  // FNV-1a over the experiment name and the ordered config entries.
  // Thread count and wall clock are deliberately not part of the config.
  std::uint64_t config_hash() const;
};

// ---------------------------------------------------------------------------
// Monte Carlo campaigns. Replicate i always uses the stream derived from
// (master_seed, i), so samples are identical for every thread count.

// M replicates of T_N(psi); KS distance against N(0, sigma^2) recorded.
RunReport run_marginal_clt(const MultiplicitySpec& spec, std::size_t N,
                           std::size_t M, double psi, std::uint64_t master_seed,
                           unsigned threads = 0);

// Empirical covariance of (T_N(phi1), T_N(phi2)) vs K(|phi1 - phi2|).
RunReport run_joint_cov(const MultiplicitySpec& spec, std::size_t N,
                        std::size_t M, double phi1, double phi2,
                        std::uint64_t master_seed, unsigned threads = 0);

struct IstarRun {
  RunReport report;
  Histogram hist;
};

// n_paths draws of I*; records min I* and the worst per-path Fubini ratio
// |mean_phi I_phi| / max_phi |I_phi|.
IstarRun run_istar(std::size_t n_paths, std::size_t grid,
                   BridgeScaling scaling, const IntegralConfig& cfg,
                   std::uint64_t master_seed, unsigned threads = 0,
                   std::size_t hist_bins = 60);

// For each N in the schedule, M replicates of T_N* (default grid for that
// degree); two-sample KS against `reference_istar` and the fraction of
// replicates with T_N* in [1, 5] are recorded per N.
RunReport run_convergence(const MultiplicitySpec& spec,
                          std::span<const std::size_t> N_schedule,
                          std::size_t M, std::uint64_t master_seed,
                          std::span<const double> reference_istar,
                          unsigned threads = 0);

}  // namespace polymax

#endif  // POLYMAX_EXPERIMENTS_HPP_
