#include "polymax/rng.hpp"

#include <cmath>

namespace polymax {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPi = 6.283185307179586476925286766559;

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}
}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += kGolden);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream_id) {
  std::uint64_t s = master ^ (kGolden * (stream_id + 1));
  std::uint64_t z = splitmix64(s);
  return z ^ splitmix64(s);
}

RngStream::RngStream(std::uint64_t master, std::uint64_t stream_id) {
  seed_.master = master;
  seed_.stream = stream_id;
  seed_.derived = derive_stream_seed(master, stream_id);
  std::uint64_t s = seed_.derived;
  for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_angle() { return kTwoPi * next_uniform(); }

double RngStream::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; 1-u maps [0,1) to (0,1] so the log is finite.
  const double r = std::sqrt(-2.0 * std::log1p(-next_uniform()));
  const double t = kTwoPi * next_uniform();
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

}  // namespace polymax
