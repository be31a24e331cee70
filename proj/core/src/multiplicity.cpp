#include "polymax/multiplicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace polymax {

namespace {

std::uint64_t checked_pow_u64(std::uint64_t base, std::uint64_t exp,
                              const char* what) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
      throw std::overflow_error(what);
    r *= base;
  }
  return r;
}

constexpr unsigned __int128 kU128Max = ~static_cast<unsigned __int128>(0);

void checked_add_u128(unsigned __int128& acc, unsigned __int128 v,
                      const char* what) {
  if (v > kU128Max - acc) throw std::overflow_error(what);
  acc += v;
}

}  // namespace

MultiplicitySpec MultiplicitySpec::constant(std::uint64_t c) {
  if (c == 0) throw std::invalid_argument("multiplicity constant must be >= 1");
  return {Kind::Constant, c, {}};
}

MultiplicitySpec MultiplicitySpec::power(std::uint64_t p) {
  return {Kind::Power, p, {}};
}

MultiplicitySpec MultiplicitySpec::geometric(std::uint64_t b) {
  if (b < 2)
    throw std::invalid_argument("geometric base must be >= 2");
  return {Kind::Geometric, b, {}};
}

MultiplicitySpec MultiplicitySpec::explicit_list(
    std::vector<std::uint64_t> terms) {
  if (terms.empty())
    throw std::invalid_argument("explicit multiplicity list must be nonempty");
  for (auto t : terms)
    if (t == 0)
      throw std::invalid_argument("multiplicities must be positive integers");
  MultiplicitySpec s;
  s.kind = Kind::Explicit;
  s.terms = std::move(terms);
  return s;
}

std::uint64_t MultiplicitySpec::term(std::size_t k) const {
  if (k == 0) throw std::invalid_argument("term index is 1-based");
  switch (kind) {
    case Kind::Constant:
      return param;
    case Kind::Power:
      return checked_pow_u64(k, param, "multiplicity term k^p overflows");
    case Kind::Geometric:
      return checked_pow_u64(param, k, "multiplicity term b^k overflows");
    case Kind::Explicit:
      if (k > terms.size())
        throw std::invalid_argument("explicit multiplicity list exhausted");
      return terms[k - 1];
  }
  throw std::logic_error("unreachable");
}

std::string MultiplicitySpec::to_key_value() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Constant:
      os << "kind=constant c=" << param;
      break;
    case Kind::Power:
      os << "kind=power p=" << param;
      break;
    case Kind::Geometric:
      os << "kind=geometric b=" << param;
      break;
    case Kind::Explicit: {
      os << "kind=explicit terms=";
      for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) os << ',';
        os << terms[i];
      }
      break;
    }
  }
  return os.str();
}

MultiplicitySpec MultiplicitySpec::from_key_value(const std::string& text) {
  std::istringstream is(text);
  std::string tok, kind_str;
  std::uint64_t param = 0;
  bool have_param = false;
  std::vector<std::uint64_t> terms;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("bad multiplicity record token: " + tok);
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "kind") {
      kind_str = val;
    } else if (key == "c" || key == "p" || key == "b") {
      param = std::stoull(val);
      have_param = true;
    } else if (key == "terms") {
      std::istringstream ts(val);
      std::string item;
      while (std::getline(ts, item, ',')) terms.push_back(std::stoull(item));
    } else {
      throw std::invalid_argument("unknown multiplicity record key: " + key);
    }
  }
  if (kind_str == "constant") {
    if (!have_param) throw std::invalid_argument("constant spec needs c=");
    return constant(param);
  }
  if (kind_str == "power") {
    if (!have_param) throw std::invalid_argument("power spec needs p=");
    return power(param);
  }
  if (kind_str == "geometric") {
    if (!have_param) throw std::invalid_argument("geometric spec needs b=");
    return geometric(param);
  }
  if (kind_str == "explicit") return explicit_list(std::move(terms));
  throw std::invalid_argument("unknown multiplicity kind: " + kind_str);
}

double PrefixNorms::s() const {
  return std::sqrt(static_cast<double>(sumsq));
}

double PrefixNorms::total() const { return static_cast<double>(sum); }

std::string uint128_to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

PrefixNorms prefix_norms(const MultiplicitySpec& spec, std::size_t N) {
  if (N == 0) throw std::invalid_argument("prefix_norms: N must be >= 1");
  PrefixNorms out;
  out.count = N;
  for (std::size_t k = 1; k <= N; ++k) {
    const unsigned __int128 n = spec.term(k);
    checked_add_u128(out.sum, n, "prefix_norms: sum n_k overflows");
    checked_add_u128(out.sumsq, n * n, "prefix_norms: sum n_k^2 overflows");
  }
  return out;
}

double lindberg_margin(const MultiplicitySpec& spec, std::size_t N,
                       double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("lindberg_margin: eps > 0");
  const double sN = prefix_norms(spec, N).s();
  double sum = 0.0;
  for (std::size_t k = 1; k <= N; ++k) {
    const double nk = static_cast<double>(spec.term(k));
    sum += std::exp(-eps * sN / nk);
  }
  return sum;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

VerdictReport lindberg_verdict(const MultiplicitySpec& spec,
                               std::span<const double> eps_list,
                               std::span<const std::size_t> N_schedule,
                               double tol) {
  if (N_schedule.size() < 3)
    throw std::invalid_argument("lindberg_verdict: need >= 3 schedule points");
  if (!std::is_sorted(N_schedule.begin(), N_schedule.end()) ||
      std::adjacent_find(N_schedule.begin(), N_schedule.end()) !=
          N_schedule.end())
    throw std::invalid_argument(
        "lindberg_verdict: N_schedule must be strictly increasing");
  if (eps_list.empty())
    throw std::invalid_argument("lindberg_verdict: eps_list is empty");
  if (!(tol > 0.0)) throw std::invalid_argument("lindberg_verdict: tol > 0");

  VerdictReport rep;
  rep.tol = tol;
  bool any_fail = false;
  bool all_pass = true;
  std::ostringstream why;

  // Extrapolation horizon: virtual schedule steps beyond the last N. The
  // margin of a sequence meeting the condition decays at least geometrically
  // per schedule doubling once past its peak, so projecting the final ratio
  // forward over-estimates the limit.
  constexpr int kHorizon = 64;
  constexpr double kStallRatio = 0.9;

  for (double eps : eps_list) {
    std::vector<double> m(N_schedule.size());
    for (std::size_t i = 0; i < N_schedule.size(); ++i) {
      m[i] = lindberg_margin(spec, N_schedule[i], eps);
      rep.trace.push_back({eps, N_schedule[i], m[i]});
    }
    const std::size_t last = m.size() - 1;
    const std::size_t peak =
        static_cast<std::size_t>(std::max_element(m.begin(), m.end()) -
                                 m.begin());
    bool tail_nonincreasing = true;
    for (std::size_t i = peak; i < last; ++i)
      if (m[i + 1] > m[i] * (1.0 + 1e-9)) tail_nonincreasing = false;

    Verdict v = Verdict::Inconclusive;
    if (tail_nonincreasing && m[last] < tol) {
      v = Verdict::Pass;
      why << "eps=" << eps << ": margin below tol; ";
    } else if (tail_nonincreasing && peak + 2 <= last && m[last - 1] > 0.0) {
      const double ratio = m[last] / m[last - 1];
      if (ratio < kStallRatio &&
          m[last] * std::pow(ratio, kHorizon) < tol) {
        v = Verdict::Pass;
        why << "eps=" << eps << ": extrapolated below tol (ratio=" << ratio
            << "); ";
      }
    }
    if (v != Verdict::Pass) {
      // Bounded-below detection: the final margin sits at a positive level
      // and the last-term scale s_N/n_N has stopped growing, so every later
      // margin keeps the same floor exp(-eps*s_N/n_N).
      const double rho_last =
          prefix_norms(spec, N_schedule[last]).s() /
          static_cast<double>(spec.term(N_schedule[last]));
      const double rho_prev =
          prefix_norms(spec, N_schedule[last - 1]).s() /
          static_cast<double>(spec.term(N_schedule[last - 1]));
      const double ratio = m[last - 1] > 0.0 ? m[last] / m[last - 1] : 0.0;
      const bool margin_stalled = ratio >= kStallRatio || !tail_nonincreasing;
      const bool scale_converged =
          rho_prev > 0.0 && rho_last / rho_prev < 1.02;
      if (margin_stalled && scale_converged && m[last] >= std::sqrt(tol)) {
        v = Verdict::Fail;
        why << "eps=" << eps << ": margin stalled at " << m[last]
            << " with s_N/n_N -> " << rho_last << "; ";
      } else {
        why << "eps=" << eps << ": trend not decisive; ";
      }
    }
    if (v == Verdict::Fail) any_fail = true;
    if (v != Verdict::Pass) all_pass = false;
  }

  rep.verdict = any_fail ? Verdict::Fail
                         : (all_pass ? Verdict::Pass : Verdict::Inconclusive);
  rep.reason = why.str();
  return rep;
}

}  // namespace polymax
