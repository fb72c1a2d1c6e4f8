#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gconv/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gconv::par {

/// Whether the OpenMP path is compiled in and enabled (GCONV_SERIAL=1 disables it).
bool parallel_enabled();

/// Run f(i) for i in [0, n). The OpenMP and serial paths must produce identical
/// results; callers get that by deriving per-index RNG streams instead of sharing one.
template <class F>
void for_each_index(std::size_t n, F&& f, bool force_serial = false) {
#ifdef _OPENMP
  if (!force_serial && parallel_enabled() && n > 1) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      f(static_cast<std::size_t>(i));
    }
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) f(i);
}

/// Serial reference loop, kept for the equivalence tests and benchmarks.
template <class F>
void for_each_index_serial(std::size_t n, F&& f) {
  for_each_index(n, std::forward<F>(f), /*force_serial=*/true);
}

/// n draws of sample(stream), one derived stream per index. Deterministic for a
/// given base stream, independent of thread count.
template <class Sampler>
std::vector<double> draw_batch(std::size_t n, const RngStream& base, Sampler&& sample,
                               bool force_serial = false) {
  std::vector<double> out(n);
  for_each_index(
      n,
      [&](std::size_t i) {
        RngStream rng = base.child(i);
        out[i] = sample(rng);
      },
      force_serial);
  return out;
}

}  // namespace gconv::par
