#ifndef POLYMAX_RNG_HPP_
#define POLYMAX_RNG_HPP_

#include <array>
#include <cstdint>

namespace polymax {

// One splitmix64 step: advances the state and returns the next output.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic per-stream seed derivation. Streams derived from the same
// master seed with distinct ids are statistically independent; replicate i
// of an ensemble always uses stream id i, so results do not depend on how
// replicates are scheduled across threads.
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream_id);

struct SeedRecord {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;
  std::uint64_t derived = 0;
};

// Counter-derived xoshiro256++ stream with uniform/Gaussian draws.
// All outputs are produced by portable integer/float arithmetic, so a
// (master, stream_id) pair yields the same draw sequence on every run.
class RngStream {
 public:
  RngStream(std::uint64_t master, std::uint64_t stream_id);

  std::uint64_t next_u64();
  double next_uniform();   // [0, 1)
  double next_angle();     // [0, 2*pi)
  double next_gaussian();  // N(0, 1) via Box-Muller

  const SeedRecord& seed() const { return seed_; }

 private:
  std::array<std::uint64_t, 4> state_;
  SeedRecord seed_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace polymax

#endif  // POLYMAX_RNG_HPP_
