#ifndef POLYMAX_MULTIPLICITY_HPP_
#define POLYMAX_MULTIPLICITY_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace polymax {

// Rule generating the positive-integer multiplicity sequence {n_k}.
// Generation is deterministic and every term is checked to fit in 64 bits;
// prefix accumulators use 128-bit integers and fail loudly on overflow.
struct MultiplicitySpec {
  enum class Kind { Constant, Power, Geometric, Explicit };

  Kind kind = Kind::Constant;
  std::uint64_t param = 1;           // c, p, or b depending on kind
  std::vector<std::uint64_t> terms;  // Kind::Explicit only

  static MultiplicitySpec constant(std::uint64_t c);
  static MultiplicitySpec power(std::uint64_t p);
  static MultiplicitySpec geometric(std::uint64_t b);
  static MultiplicitySpec explicit_list(std::vector<std::uint64_t> terms);

  // n_k for 1-based k. Throws std::overflow_error if the term exceeds 64
  // bits and std::invalid_argument past the end of an explicit list.
  std::uint64_t term(std::size_t k) const;

  // Flat key-value record, e.g. "kind=power p=2", round-trippable.
  std::string to_key_value() const;
  static MultiplicitySpec from_key_value(const std::string& text);
};

struct PrefixNorms {
  std::size_t count = 0;          // N
  unsigned __int128 sumsq = 0;    // sum n_k^2, exact
  unsigned __int128 sum = 0;      // M_N = sum n_k, exact
  double s() const;               // s_N = sqrt(sumsq)
  double total() const;           // M_N as double
};

std::string uint128_to_string(unsigned __int128 v);

// Exact prefix sums for k <= N. Throws on N == 0 or accumulator overflow.
PrefixNorms prefix_norms(const MultiplicitySpec& spec, std::size_t N);

// Partial sum of the sufficiency condition: sum_{k<=N} exp(-eps * s_N / n_k).
double lindberg_margin(const MultiplicitySpec& spec, std::size_t N, double eps);

enum class Verdict { Pass, Fail, Inconclusive };

struct MarginTracePoint {
  double eps;
  std::size_t N;
  double margin;
};

struct VerdictReport {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<MarginTracePoint> trace;  // full audit trace, all (eps, N)
  std::string reason;
  double tol = 0.0;
};

const char* verdict_name(Verdict v);

// Numerical decision procedure for the condition above over an increasing
// N-schedule (>= 3 entries). Per epsilon: pass when the margin tail is
// monotone nonincreasing and either already below tol or driven below tol
// by conservatively extrapolating the final decay ratio over a 64-step
// horizon; fail when the tail stalls at a positive level; inconclusive
// otherwise. The overall verdict is fail if any epsilon fails, pass only
// if every epsilon passes.
VerdictReport lindberg_verdict(const MultiplicitySpec& spec,
                               std::span<const double> eps_list,
                               std::span<const std::size_t> N_schedule,
                               double tol);

}  // namespace polymax

#endif  // POLYMAX_MULTIPLICITY_HPP_
