#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace carnot {

/// SplitMix64 finalizer; used to derive independent engine seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Random stream addressed by (seed, stream, chunk). Every chunk of every
/// stream gets its own engine, so results do not depend on which thread
/// consumes which chunk.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk)
      : engine_(mix64(mix64(mix64(seed) ^ stream) ^ chunk)) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_open() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller. Hand-rolled because the standard
  /// distributions are not bit-reproducible across library vendors.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double theta = 2.0 * M_PI * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stable 64-bit FNV-1a over bytes, used for stream ids and config hashes.
constexpr std::uint64_t fnv1a(const char* data, std::size_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace carnot
