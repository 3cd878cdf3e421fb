#pragma once

// Chunked Monte Carlo accumulation. The serial loop is the reference
// implementation; the OpenMP loop must reproduce it bit for bit, which holds
// because each chunk owns its random stream and partial results are merged
// in chunk order after the parallel region.

#include "carnot/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace carnot {

enum class Execution { serial, parallel };

/// One draw returned by a sampling kernel.
struct Draw {
  double value = 0.0;
  bool counted = true;  // false: draw rejected, excluded from the mean
  bool hit = true;      // acceptance bookkeeping (e.g. point fell in the ball)
};

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;
  std::uint64_t draws = 0;
  std::uint64_t hits = 0;
  std::uint64_t nonfinite = 0;

  void add(const Draw& d) {
    ++draws;
    if (d.hit) ++hits;
    if (!d.counted) return;
    if (!std::isfinite(d.value)) {
      ++nonfinite;
      return;
    }
    sum += d.value;
    sum_sq += d.value * d.value;
    ++count;
  }

  void merge(const Moments& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
    draws += o.draws;
    hits += o.hits;
    nonfinite += o.nonfinite;
  }

  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }

  double variance() const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double m = sum / n;
    return std::max(0.0, (sum_sq - n * m * m) / (n - 1.0));
  }

  /// Standard error of the mean.
  double standard_error() const {
    return count ? std::sqrt(variance() / static_cast<double>(count)) : std::numeric_limits<double>::infinity();
  }

  double acceptance() const { return draws ? static_cast<double>(hits) / static_cast<double>(draws) : 0.0; }
};

/// A Monte Carlo (or quadrature) estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;

  double relative_error() const { return value != 0.0 ? std_error / std::abs(value) : std_error; }
};

inline constexpr std::uint64_t kChunkSize = 4096;

namespace detail {

template <class Kernel>
Moments run_chunk(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk, std::uint64_t n, Kernel& kernel) {
  StreamRng rng(seed, stream, chunk);
  Moments m;
  for (std::uint64_t i = 0; i < n; ++i) m.add(kernel(rng));
  return m;
}

}  // namespace detail

/// Draw `n` samples in chunks [first_chunk, first_chunk + ceil(n / kChunkSize))
/// of the stream and return their merged moments. `kernel` maps a StreamRng&
/// to a Draw and must be safe to call concurrently.
template <class Kernel>
Moments accumulate(std::uint64_t seed, std::uint64_t stream, std::uint64_t n, Execution exec, Kernel&& kernel,
                   std::uint64_t first_chunk = 0) {
  const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<Moments> parts(chunks);
  auto chunk_len = [&](std::uint64_t c) { return std::min(kChunkSize, n - c * kChunkSize); };

  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
      const auto uc = static_cast<std::uint64_t>(c);
      parts[uc] = detail::run_chunk(seed, stream, first_chunk + uc, chunk_len(uc), kernel);
    }
  } else {
    for (std::uint64_t c = 0; c < chunks; ++c)
      parts[c] = detail::run_chunk(seed, stream, first_chunk + c, chunk_len(c), kernel);
  }

  Moments total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

/// Number of chunks consumed by `accumulate` for n samples.
constexpr std::uint64_t chunks_for(std::uint64_t n) { return (n + kChunkSize - 1) / kChunkSize; }

/// Stream id derived from a label, so that independent quantities drawn
/// under one seed never share random numbers.
inline std::uint64_t stream_id(const char* label, std::uint64_t salt = 0) {
  std::uint64_t n = 0;
  while (label[n] != '\0') ++n;
  return mix64(fnv1a(label, n) ^ salt);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_thread_cap(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

}  // namespace carnot
