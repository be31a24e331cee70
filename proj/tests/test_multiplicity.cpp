#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "polymax/multiplicity.hpp"

using namespace polymax;

TEST_CASE("prefix norms closed forms") {
  const auto c1 = MultiplicitySpec::constant(1);
  const auto n500 = prefix_norms(c1, 500);
  CHECK(n500.count == 500);
  CHECK(static_cast<double>(n500.sumsq) == 500.0);
  CHECK(n500.s() == doctest::Approx(std::sqrt(500.0)).epsilon(1e-15));
  CHECK(n500.s() == doctest::Approx(22.3607).epsilon(1e-5));

  const auto p1 = MultiplicitySpec::power(1);
  const auto n3 = prefix_norms(p1, 3);  // n = (1,2,3)
  CHECK(static_cast<double>(n3.sumsq) == 14.0);
  CHECK(static_cast<double>(n3.sum) == 6.0);
  CHECK(n3.s() == doctest::Approx(3.741657386773941385583749).epsilon(1e-15));

  const auto g2 = MultiplicitySpec::geometric(2);
  const auto n4 = prefix_norms(g2, 4);  // n = (2,4,8,16)
  CHECK(static_cast<double>(n4.sumsq) == 340.0);
  CHECK(static_cast<double>(n4.sum) == 30.0);
}

TEST_CASE("prefix norms strictly increasing in N") {
  const auto spec = MultiplicitySpec::power(2);
  unsigned __int128 prev = 0;
  for (std::size_t n = 1; n <= 50; ++n) {
    const auto p = prefix_norms(spec, n);
    CHECK(p.sumsq > prev);
    prev = p.sumsq;
    CHECK(p.s() > 0.0);
  }
}

TEST_CASE("overflow fails loudly, never wraps") {
  const auto g2 = MultiplicitySpec::geometric(2);
  CHECK_THROWS_AS((void)prefix_norms(g2, 64), std::overflow_error);
  CHECK_NOTHROW((void)prefix_norms(g2, 63));

  const std::uint64_t big = 1ull << 63;
  const auto wide = MultiplicitySpec::explicit_list({big, big, big, big});
  CHECK_THROWS_AS((void)prefix_norms(wide, 4), std::overflow_error);

  CHECK_THROWS_AS((void)prefix_norms(g2, 0), std::invalid_argument);
  const auto ex = MultiplicitySpec::explicit_list({1, 2});
  CHECK_THROWS_AS((void)prefix_norms(ex, 3), std::invalid_argument);
}

TEST_CASE("spec key-value record round-trips") {
  for (const auto& spec :
       {MultiplicitySpec::constant(3), MultiplicitySpec::power(2),
        MultiplicitySpec::geometric(2),
        MultiplicitySpec::explicit_list({1, 5, 2})}) {
    const auto back = MultiplicitySpec::from_key_value(spec.to_key_value());
    CHECK(back.kind == spec.kind);
    CHECK(back.param == spec.param);
    CHECK(back.terms == spec.terms);
    for (std::size_t k = 1; k <= 2; ++k) CHECK(back.term(k) == spec.term(k));
  }
  CHECK_THROWS_AS((void)MultiplicitySpec::from_key_value("kind=banana"),
                  std::invalid_argument);
}

TEST_CASE("lindberg margin values") {
  const auto c1 = MultiplicitySpec::constant(1);
  // N exp(-eps sqrt(N)); direct-summation oracle is the same closed form here.
  CHECK(lindberg_margin(c1, 100, 1.0) ==
        doctest::Approx(100.0 * std::exp(-10.0)).epsilon(1e-12));
  CHECK(lindberg_margin(c1, 1, 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  // Direct-summation oracle for the geometric case.
  const auto g2 = MultiplicitySpec::geometric(2);
  const auto norms = prefix_norms(g2, 20);
  double oracle = 0.0;
  for (std::size_t k = 1; k <= 20; ++k)
    oracle += std::exp(-norms.s() / static_cast<double>(g2.term(k)));
  CHECK(lindberg_margin(g2, 20, 1.0) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(lindberg_margin(g2, 20, 1.0) >= std::exp(-2.0));
}

TEST_CASE("margin monotone decreasing in eps") {
  const auto p1 = MultiplicitySpec::power(1);
  double prev = lindberg_margin(p1, 200, 0.05);
  for (double eps : {0.1, 0.5, 1.0, 2.0}) {
    const double m = lindberg_margin(p1, 200, eps);
    CHECK(m < prev);
    CHECK(m > 0.0);
    prev = m;
  }
}

TEST_CASE("constant spec margin(4N) < margin(N) once eps*sqrt(N) > log 4") {
  // The comparison holds exactly when eps*sqrt(N) > log 4; test inside that
  // region (N >= 256 covers every eps >= 0.1).
  const auto c1 = MultiplicitySpec::constant(1);
  for (double eps : {0.1, 0.5, 1.0}) {
    for (std::size_t n : {256u, 400u, 1024u}) {
      CHECK(lindberg_margin(c1, 4 * n, eps) < lindberg_margin(c1, n, eps));
    }
  }
}

TEST_CASE("geometric base 2 keeps s_N/n_N below 2") {
  const auto g2 = MultiplicitySpec::geometric(2);
  for (std::size_t n = 2; n <= 60; ++n) {
    const double ratio =
        prefix_norms(g2, n).s() / static_cast<double>(g2.term(n));
    CHECK(ratio < 2.0);
    CHECK(lindberg_margin(g2, n, 1.0) >= std::exp(-2.0));
  }
}

TEST_CASE("verdict: power sequences pass, geometric fails") {
  const std::vector<std::size_t> schedule{625, 1250, 2500, 5000, 10000};
  const std::vector<double> eps{0.1, 1.0};
  const double tol = 1e-6;

  for (std::uint64_t p : {0ull, 1ull, 2ull}) {
    const auto rep =
        lindberg_verdict(MultiplicitySpec::power(p), eps, schedule, tol);
    INFO("p=", p, " reason=", rep.reason);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.trace.size() == eps.size() * schedule.size());
  }

  const auto c1 =
      lindberg_verdict(MultiplicitySpec::constant(1), eps, schedule, tol);
  CHECK(c1.verdict == Verdict::Pass);

  const std::vector<std::size_t> gsched{10, 20, 30, 40, 50, 60};
  const auto g =
      lindberg_verdict(MultiplicitySpec::geometric(2), eps, gsched, tol);
  INFO(g.reason);
  CHECK(g.verdict == Verdict::Fail);
  // terminal margin stays above 0.9 exp(-2 eps) for each eps
  for (double e : eps) {
    const double terminal = lindberg_margin(MultiplicitySpec::geometric(2),
                                            gsched.back(), e);
    CHECK(terminal >= 0.9 * std::exp(-2.0 * e));
  }
}

TEST_CASE("verdict: pre-peak trace is inconclusive, not fail") {
  // Margins still rising at these N for eps = 0.01 (peak near N = 4e4),
  // but s_N/n_N keeps growing, so no fail verdict.
  const std::vector<std::size_t> schedule{4, 8, 16};
  const std::vector<double> eps{0.01};
  const auto rep = lindberg_verdict(MultiplicitySpec::constant(1), eps,
                                    schedule, 1e-6);
  CHECK(rep.verdict == Verdict::Inconclusive);
}

TEST_CASE("verdict input validation") {
  const std::vector<double> eps{0.5};
  const std::vector<std::size_t> two{10, 20};
  CHECK_THROWS_AS((void)lindberg_verdict(MultiplicitySpec::constant(1), eps,
                                         two, 1e-6),
                  std::invalid_argument);
  const std::vector<std::size_t> unsorted{10, 5, 20};
  CHECK_THROWS_AS((void)lindberg_verdict(MultiplicitySpec::constant(1), eps,
                                         unsorted, 1e-6),
                  std::invalid_argument);
}
