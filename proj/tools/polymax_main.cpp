// polymax: random polynomials with uniform roots on the unit circle, their
// scaled log-magnitude maxima, and the Brownian-bridge functional they
// converge to. Each subcommand runs one experiment or kernel computation and
// writes CSV/JSON artifacts with a config hash and master seed in the header.

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "polymax/bridge.hpp"
#include "polymax/coupling.hpp"
#include "polymax/experiments.hpp"
#include "polymax/io.hpp"
#include "polymax/limitcov.hpp"
#include "polymax/multiplicity.hpp"
#include "polymax/parallel.hpp"
#include "polymax/polycircle.hpp"

namespace fs = std::filesystem;
using namespace polymax;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

struct CommonOpts {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out = "out";
  std::string format = "csv";
  unsigned threads = 0;
};

struct SpecOpts {
  std::string kind = "constant";
  std::uint64_t c = 1, p = 1, b = 2;
  std::string terms;

  MultiplicitySpec build() const {
    if (kind == "constant") return MultiplicitySpec::constant(c);
    if (kind == "power") return MultiplicitySpec::power(p);
    if (kind == "geometric") return MultiplicitySpec::geometric(b);
    if (kind == "explicit") {
      std::vector<std::uint64_t> list;
      std::string item;
      std::istringstream is(terms);
      while (std::getline(is, item, ',')) list.push_back(std::stoull(item));
      return MultiplicitySpec::explicit_list(std::move(list));
    }
    throw std::invalid_argument("unknown multiplicity kind: " + kind);
  }
};

void add_spec_options(CLI::App* sub, SpecOpts& spec) {
  sub->add_option("--kind", spec.kind,
                  "multiplicity rule: constant|power|geometric|explicit");
  sub->add_option("--c", spec.c, "constant value (kind=constant)");
  sub->add_option("--p", spec.p, "exponent (kind=power, n_k = k^p)");
  sub->add_option("--b", spec.b, "base (kind=geometric, n_k = b^k)");
  sub->add_option("--terms", spec.terms,
                  "comma list of multiplicities (kind=explicit)");
}

void generate_seed(CommonOpts& common) {
  std::random_device rd;
  common.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^
                static_cast<std::uint64_t>(std::time(nullptr));
  std::printf("generated master_seed=%llu\n",
              static_cast<unsigned long long>(common.seed));
}

std::vector<std::size_t> parse_schedule(const std::string& text) {
  std::vector<std::size_t> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) out.push_back(std::stoull(item));
  return out;
}

// Figure-style table, written as CSV or as a JSON array of rows.
void emit_table(const CommonOpts& common, const RunReport& rep,
                const std::string& name,
                const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows) {
  const fs::path dir(common.out);
  if (common.format == "json") {
    nlohmann::json j;
    j["experiment"] = rep.experiment;
    j["config_hash"] = rep.config_hash();
    j["master_seed"] = rep.master_seed;
    j["columns"] = columns;
    j["rows"] = rows;
    write_file_atomic(dir / (name + ".json"), j.dump(2) + "\n");
    return;
  }
  CsvBuilder csv(columns);
  csv.meta("experiment", rep.experiment);
  csv.meta("config_hash", rep.config_hash());
  csv.meta("master_seed", rep.master_seed);
  for (const auto& r : rows) csv.row(r);
  write_file_atomic(dir / (name + ".csv"), csv.str());
}

void emit_report(const CommonOpts& common, const RunReport& rep,
                 const std::string& name) {
  write_file_atomic(fs::path(common.out) / (name + ".json"),
                    report_to_json(rep));
}

void emit_samples(const CommonOpts& common, const RunReport& rep,
                  const std::string& name) {
  write_file_atomic(fs::path(common.out) / (name + ".csv"),
                    report_samples_csv(rep));
}

// ---------------------------------------------------------------------------

void cmd_lindberg(const CommonOpts& common, const SpecOpts& spec_opts,
                  std::vector<double> eps_list, const std::string& schedule,
                  double tol) {
  const auto spec = spec_opts.build();
  const auto sched = parse_schedule(schedule);
  if (eps_list.empty()) eps_list = {0.1, 1.0};
  const auto verdict = lindberg_verdict(spec, eps_list, sched, tol);

  RunReport rep;
  rep.experiment = "lindberg";
  rep.master_seed = common.seed;
  rep.set_config("spec", spec.to_key_value());
  rep.set_config("schedule", schedule);
  rep.set_config("tol", tol);

  std::vector<std::vector<double>> rows;
  for (const auto& t : verdict.trace)
    rows.push_back({t.eps, static_cast<double>(t.N), t.margin});
  emit_table(common, rep, "lindberg_trace", {"eps", "N", "margin"}, rows);

  nlohmann::json j;
  j["experiment"] = rep.experiment;
  j["config_hash"] = rep.config_hash();
  j["verdict"] = verdict_name(verdict.verdict);
  j["reason"] = verdict.reason;
  j["tol"] = tol;
  j["spec"] = spec.to_key_value();
  write_file_atomic(fs::path(common.out) / "lindberg.json", j.dump(2) + "\n");

  std::printf("lindberg: spec={%s} verdict=%s\n",
              spec.to_key_value().c_str(), verdict_name(verdict.verdict));
}

void cmd_covariance(const CommonOpts& common, int points, double abs_tol) {
  QuadratureConfig q;
  q.abs_tol = abs_tol;
  RunReport rep;
  rep.experiment = "covariance";
  rep.master_seed = common.seed;
  rep.set_config("points", static_cast<std::uint64_t>(points));
  rep.set_config("abs_tol", abs_tol);

  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double theta =
        2 * kPi * static_cast<double>(i) / static_cast<double>(points - 1);
    rows.push_back({theta, cov_kernel(theta, q)});
  }
  emit_table(common, rep, "covariance", {"theta", "K"}, rows);
  std::printf("covariance: %d points, K(0)=%.6f sigma^2=%.6f\n", points,
              rows.front()[1], sigma_sq(q));
}

void cmd_sample_poly(const CommonOpts& common, const SpecOpts& spec_opts,
                     std::size_t n, std::size_t curve_points) {
  const auto spec = spec_opts.build();
  RngStream rng(common.seed, 0);
  const auto sample = sample_poly(spec, n, rng);

  RunReport rep;
  rep.experiment = "sample-poly";
  rep.master_seed = common.seed;
  rep.set_config("spec", spec.to_key_value());
  rep.set_config("N", static_cast<std::uint64_t>(n));
  rep.set_config("curve_points", static_cast<std::uint64_t>(curve_points));

  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < n; ++k)
    rows.push_back({static_cast<double>(k + 1), sample.angles[k],
                    static_cast<double>(sample.mults[k])});
  emit_table(common, rep, "poly_sample", {"k", "angle", "mult"}, rows);

  if (curve_points > 0) {
    std::vector<std::vector<double>> curve;
    const double sN = sample.norms.s();
    for (std::size_t j = 0; j < curve_points; ++j) {
      const double psi = 2 * kPi * static_cast<double>(j) /
                         static_cast<double>(curve_points);
      try {
        const double L = log_magnitude(sample, psi);
        curve.push_back({psi, L, L / sN});
      } catch (const std::domain_error&) {
        // singular grid point: skip
      }
    }
    emit_table(common, rep, "poly_curve", {"psi", "L", "T"}, curve);
  }
  const auto best = maximize(sample, GridConfig::for_degree(n));
  std::printf("sample-poly: N=%zu s_N=%.4f T*=%.4f at psi=%.4f\n", n,
              sample.norms.s(), best.t_star, best.psi_star);
}

void cmd_bridge_sim(const CommonOpts& common, std::size_t grid,
                    const std::string& scaling_str, double trunc_eps,
                    bool curve) {
  const auto scaling = scaling_str == "paper"
                           ? BridgeScaling::PaperBmSubtraction
                           : BridgeScaling::UnitVarianceNormalized;
  IntegralConfig cfg;
  cfg.trunc_eps = trunc_eps;
  RngStream rng(common.seed, 0);
  const auto path = sample_bridge(grid, scaling, rng);

  RunReport rep;
  rep.experiment = "bridge-sim";
  rep.master_seed = common.seed;
  rep.set_config("grid", static_cast<std::uint64_t>(grid));
  rep.set_config("scaling", scaling_name(scaling));
  rep.set_config("trunc_eps", trunc_eps);

  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j <= grid; ++j)
    rows.push_back({path.step() * static_cast<double>(j), path.values[j]});
  emit_table(common, rep, "bridge_path", {"psi", "W"}, rows);

  const auto r = maximize_I(path, cfg);
  rep.set_stat("I_star", r.i_star);
  rep.set_stat("phi_star", r.phi_star);

  if (curve) {
    const auto all = integral_all_shifts(path, cfg);
    std::vector<std::vector<double>> iphi;
    for (std::size_t m = 0; m < all.size(); ++m)
      iphi.push_back({path.step() * static_cast<double>(m), all[m]});
    emit_table(common, rep, "bridge_iphi", {"phi", "I"}, iphi);
  }
  emit_report(common, rep, "bridge_report");
  std::printf("bridge-sim: grid=%zu %s I*=%.4f at phi=%.4f\n", grid,
              scaling_name(scaling), r.i_star, r.phi_star);
}

void cmd_istar(const CommonOpts& common, std::size_t paths, std::size_t grid,
               const std::string& scaling_str, double trunc_eps,
               std::size_t bins) {
  const auto scaling = scaling_str == "paper"
                           ? BridgeScaling::PaperBmSubtraction
                           : BridgeScaling::UnitVarianceNormalized;
  IntegralConfig cfg;
  cfg.trunc_eps = trunc_eps;
  auto run = run_istar(paths, grid, scaling, cfg, common.seed, common.threads,
                       bins);
  emit_samples(common, run.report, "istar_samples");
  write_file_atomic(fs::path(common.out) / "istar_hist.csv",
                    histogram_csv(run.hist, run.report));
  emit_report(common, run.report, "istar_report");
  std::printf("istar-dist: %zu paths grid=%zu min I*=%.4f mean I*=%.4f (%.1fs)\n",
              paths, grid, run.report.stat("min_istar"),
              run.report.stat("mean_istar"), run.report.wall_seconds);
}

void cmd_marginal(const CommonOpts& common, const SpecOpts& spec_opts,
                  std::size_t n, std::size_t m, double psi) {
  const auto rep = run_marginal_clt(spec_opts.build(), n, m, psi, common.seed,
                                    common.threads);
  emit_samples(common, rep, "marginal_samples");
  emit_report(common, rep, "marginal_report");
  std::printf("marginal-clt: N=%zu M=%zu ks=%.4f mean=%.4f var=%.4f (%.1fs)\n",
              n, m, rep.stat("ks_normal"), rep.stat("mean"),
              rep.stat("variance"), rep.wall_seconds);
}

void cmd_joint(const CommonOpts& common, const SpecOpts& spec_opts,
               std::size_t n, std::size_t m, double phi1, double phi2) {
  const auto rep = run_joint_cov(spec_opts.build(), n, m, phi1, phi2,
                                 common.seed, common.threads);
  emit_samples(common, rep, "joint_samples");
  emit_report(common, rep, "joint_report");
  std::printf(
      "joint-cov: N=%zu M=%zu cov=%.4f target=%.4f (|z|=%.2f) (%.1fs)\n", n, m,
      rep.stat("cov"), rep.stat("K_target"), std::abs(rep.stat("cov_z")),
      rep.wall_seconds);
}

void cmd_convergence(const CommonOpts& common, const SpecOpts& spec_opts,
                     const std::string& schedule, std::size_t m,
                     std::size_t ref_paths, std::size_t ref_grid) {
  const auto spec = spec_opts.build();
  const auto sched = parse_schedule(schedule);

  // The I* reference uses its own derived master seed so the T_N* ensembles
  // and the reference stay independent.
  const std::uint64_t ref_seed = derive_stream_seed(common.seed, 0x49535441);
  auto ref = run_istar(ref_paths, ref_grid,
                       BridgeScaling::UnitVarianceNormalized, IntegralConfig{},
                       ref_seed, common.threads);
  const auto& ref_sample = ref.report.samples.at("I_star");
  emit_samples(common, ref.report, "istar_reference");

  const auto rep = run_convergence(spec, sched, m, common.seed, ref_sample,
                                   common.threads);

  // Figure-5 style table: per replicate, log max |P_N|^2 with the s_N and
  // 5 s_N reference columns.
  std::vector<std::vector<double>> fig5;
  std::vector<std::vector<double>> ksrows;
  for (std::size_t N : sched) {
    const auto& ts = rep.samples.at("Tstar_N" + std::to_string(N));
    const double sN = rep.stat("s_N_N" + std::to_string(N));
    for (std::size_t i = 0; i < ts.size(); ++i)
      fig5.push_back({static_cast<double>(N), static_cast<double>(i),
                      ts[i] * sN, sN, 5.0 * sN});
    ksrows.push_back({static_cast<double>(N),
                      rep.stat("ks_N" + std::to_string(N)),
                      rep.stat("band_fraction_N" + std::to_string(N)), sN});
  }
  emit_table(common, rep, "convergence_samples",
             {"N", "replicate", "log_max", "s_N", "five_s_N"}, fig5);
  emit_table(common, rep, "convergence_ks",
             {"N", "ks", "band_fraction", "s_N"}, ksrows);
  emit_report(common, rep, "convergence_report");

  std::printf("convergence: spec={%s} M=%zu;", spec.to_key_value().c_str(), m);
  for (const auto& row : ksrows)
    std::printf(" KS(N=%d)=%.4f", static_cast<int>(row[0]), row[1]);
  std::printf(" (%.1fs)\n", rep.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "polymax: maxima of random polynomials on the unit circle and their "
      "Brownian-bridge limit"};
  app.require_subcommand(1);
  app.fallthrough(true);
  app.set_config("--config", "", "flat key=value config file; flags override");

  CommonOpts common;
  auto* seed_opt =
      app.add_option("--seed", common.seed, "master seed (64-bit unsigned)");
  // A missing seed is generated, printed, and recorded in every artifact.
  auto ensure_seed = [&common, seed_opt] {
    if (seed_opt->count() == 0 && !common.seed_set) generate_seed(common);
    common.seed_set = true;
  };
  app.add_option("--out", common.out, "output directory")
      ->capture_default_str();
  app.add_option("--format", common.format, "table format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--threads", common.threads,
                 "worker thread cap (0 = hardware)");

  SpecOpts spec;

  auto* lind = app.add_subcommand("lindberg", "sufficiency-condition verdict");
  add_spec_options(lind, spec);
  std::vector<double> eps_list;
  std::string schedule = "625,1250,2500,5000,10000";
  double tol = 1e-6;
  lind->add_option("--eps", eps_list, "epsilon values (repeatable)");
  lind->add_option("--schedule", schedule, "comma list of increasing N");
  lind->add_option("--tol", tol, "pass threshold on the margin");
  lind->callback([&] {
    ensure_seed();
    cmd_lindberg(common, spec, eps_list, schedule, tol); });

  auto* cov = app.add_subcommand("covariance", "K(theta) table (figure 1)");
  int cov_points = 200;
  double cov_tol = 1e-10;
  cov->add_option("--points", cov_points, "rows in the table");
  cov->add_option("--abs-tol", cov_tol, "quadrature tolerance");
  cov->callback([&] {
    ensure_seed();
    cmd_covariance(common, cov_points, cov_tol); });

  auto* sp = app.add_subcommand("sample-poly",
                                "one polynomial draw (figure 4 curve)");
  add_spec_options(sp, spec);
  std::size_t sp_n = 500, sp_curve = 4096;
  sp->add_option("--n", sp_n, "degree N");
  sp->add_option("--curve-points", sp_curve, "log-magnitude curve rows");
  sp->callback([&] {
    ensure_seed();
    cmd_sample_poly(common, spec, sp_n, sp_curve); });

  auto* bs = app.add_subcommand("bridge-sim",
                                "one bridge path and I_phi (figure 2)");
  std::size_t bs_grid = 2048;
  std::string bs_scaling = "normalized";
  double bs_eps = 2 * kPi * 1e-4;
  bool bs_curve = true;
  bs->add_option("--grid", bs_grid, "grid size M");
  bs->add_option("--scaling", bs_scaling, "normalized|paper")
      ->check(CLI::IsMember({"normalized", "paper"}));
  bs->add_option("--trunc-eps", bs_eps, "endpoint truncation");
  bs->add_flag("--curve,!--no-curve", bs_curve, "emit (phi, I_phi) table");
  bs->callback(
      [&] {
        ensure_seed();
        cmd_bridge_sim(common, bs_grid, bs_scaling, bs_eps, bs_curve); });

  auto* is = app.add_subcommand("istar-dist",
                                "I* ensemble and histogram (figure 3)");
  std::size_t is_paths = 10000, is_grid = 2048, is_bins = 60;
  std::string is_scaling = "normalized";
  double is_eps = 2 * kPi * 1e-4;
  is->add_option("--paths", is_paths, "number of bridge paths");
  is->add_option("--grid", is_grid, "grid size M");
  is->add_option("--scaling", is_scaling, "normalized|paper")
      ->check(CLI::IsMember({"normalized", "paper"}));
  is->add_option("--trunc-eps", is_eps, "endpoint truncation");
  is->add_option("--bins", is_bins, "histogram bins");
  is->callback([&] {
    ensure_seed();
    cmd_istar(common, is_paths, is_grid, is_scaling, is_eps, is_bins);
  });

  auto* mc = app.add_subcommand("marginal-clt",
                                "ensemble of T_N(psi) vs N(0, sigma^2)");
  std::size_t mc_n = 4000, mc_m = 2000;
  double mc_psi = 0.0;
  add_spec_options(mc, spec);
  mc->add_option("--n", mc_n, "degree N");
  mc->add_option("--m", mc_m, "replicates");
  mc->add_option("--psi", mc_psi, "evaluation angle");
  mc->callback([&] {
    ensure_seed();
    cmd_marginal(common, spec, mc_n, mc_m, mc_psi); });

  auto* jc = app.add_subcommand("joint-cov",
                                "empirical covariance of a T_N pair vs K");
  std::size_t jc_n = 4000, jc_m = 4000;
  double jc_phi1 = 0.0, jc_phi2 = 1.0;
  add_spec_options(jc, spec);
  jc->add_option("--n", jc_n, "degree N");
  jc->add_option("--m", jc_m, "replicates");
  jc->add_option("--phi1", jc_phi1, "first angle");
  jc->add_option("--phi2", jc_phi2, "second angle");
  jc->callback(
      [&] {
        ensure_seed();
        cmd_joint(common, spec, jc_n, jc_m, jc_phi1, jc_phi2); });

  auto* cv = app.add_subcommand(
      "convergence", "T_N* ensembles vs an I* reference (figure 5)");
  std::string cv_schedule = "250,500,1000,2000";
  std::size_t cv_m = 1000, cv_ref_paths = 10000, cv_ref_grid = 2048;
  add_spec_options(cv, spec);
  cv->add_option("--schedule", cv_schedule, "comma list of increasing N");
  cv->add_option("--m", cv_m, "replicates per N");
  cv->add_option("--ref-paths", cv_ref_paths, "I* reference ensemble size");
  cv->add_option("--ref-grid", cv_ref_grid, "I* reference grid");
  cv->callback([&] {
    ensure_seed();
    cmd_convergence(common, spec, cv_schedule, cv_m, cv_ref_paths,
                    cv_ref_grid);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "{\"error\":\"config\",\"detail\":\"%s\"}\n",
                 e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "{\"error\":\"runtime\",\"detail\":\"%s\"}\n",
                 e.what());
    return 3;
  }
  return 0;
}
