#pragma once

// Counter-based generator: every draw is splitmix64 applied to a key derived
// from (seed, stream, counter). Outputs are reproducible across platforms and
// independent of evaluation order, so per-site and per-replicate substreams
// can be generated in parallel without coordination. Distribution transforms
// (Box-Muller, inverse-exponential) are spelled out here instead of using
// <random>, whose distributions are implementation-defined.

#include <cmath>
#include <cstdint>

namespace fedsurv {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix64(seed ^ splitmix64(stream * 0xD2B74407B1CE6E93ULL + 1))) {}

  // stream derivation for nested substreams (per site, per replicate, ...)
  CounterRng substream(std::uint64_t stream) const { return CounterRng(key_, stream); }

  std::uint64_t bits(std::uint64_t counter) const { return splitmix64(key_ + counter); }

  // uniform in [0, 1)
  double u01(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // uniform in (0, 1], safe for log()
  double u01_open(std::uint64_t counter) const { return 1.0 - u01(counter); }

  bool bernoulli(std::uint64_t counter, double p) const { return u01(counter) < p; }

  double exponential(std::uint64_t counter, double rate) const {
    return -std::log(u01_open(counter)) / rate;
  }

  // standard normal via Box-Muller; consumes counters c and c+1
  double normal(std::uint64_t counter) const {
    const double u1 = u01_open(counter);
    const double u2 = u01(counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t key_;
};

}  // namespace fedsurv
