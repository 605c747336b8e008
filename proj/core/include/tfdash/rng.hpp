#pragma once

#include <cstdint>

namespace tfdash {

// Counter-based uniform random stream (splitmix64). Every client owns an
// independent stream derived from (global seed, client id), so replaying a
// scenario with the same seed reproduces each decision bit for bit. The
// standard <random> distributions are implementation-defined and would break
// that guarantee.
class RandomStream {
 public:
  RandomStream() = default;
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  static RandomStream for_client(std::uint64_t global_seed, std::uint64_t client_id) {
    return RandomStream(mix(mix(global_seed) ^ (client_id + 0x9E3779B97F4A7C15ull)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

 private:
  std::uint64_t state_ = 0;
};

}  // namespace tfdash
