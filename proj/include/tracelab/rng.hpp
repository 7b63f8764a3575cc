#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace tracelab {

// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so trial campaigns can hand out independent streams and replay
// any single trial from its seed alone.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  SplitMix64(std::uint64_t seed, std::uint64_t stream)
      : state(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // standard normal, Box-Muller
  double next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  std::complex<double> next_complex_gaussian() {
    double re = next_gaussian();
    double im = next_gaussian();
    return {re, im};
  }
};

}  // namespace tracelab
