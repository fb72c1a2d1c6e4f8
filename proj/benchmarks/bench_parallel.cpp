// Throughput comparison of the serial reference loops against the OpenMP
// batch path for the hot sampling kernels. Both paths draw from the same
// per-index streams, so they produce identical numbers; only wall time moves.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "gconv/convolution.hpp"
#include "gconv/infdiv.hpp"
#include "gconv/parallel.hpp"
#include "gconv/process.hpp"
#include "gconv/weakmeasure.hpp"
#include "gconv/weakstable.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <class Fn>
double time_ms(Fn&& fn) {
  const auto start = Clock::now();
  fn();
  const auto stop = Clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

template <class Sampler>
void bench(const char* name, std::size_t n, Sampler&& sampler) {
  const gconv::RngStream base(42, 7);
  std::vector<double> serial_out, parallel_out;
  const double serial_ms = time_ms([&] {
    serial_out = gconv::par::draw_batch(n, base, sampler, /*force_serial=*/true);
  });
  const double parallel_ms = time_ms([&] {
    parallel_out = gconv::par::draw_batch(n, base, sampler);
  });
  const bool identical = serial_out == parallel_out;
  std::printf("%-28s n=%-9zu serial %9.1f ms   omp %9.1f ms   speedup %5.2fx   identical %s\n",
              name, n, serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "yes" : "NO");
}

}  // namespace

int main() {
  std::printf("parallel enabled: %s\n", gconv::par::parallel_enabled() ? "yes" : "no");

  const gconv::ConvSpec kendall = gconv::ConvSpec::kendall(0.7);
  const gconv::ConvSpec kingman = gconv::ConvSpec::kingman(0.5);

  bench("kendall kernel fold", 2000000, [&](gconv::RngStream& rng) {
    return gconv::kernel_sample(kendall, 1.0, 2.0, rng);
  });
  bench("kingman kernel fold", 1000000, [&](gconv::RngStream& rng) {
    return gconv::kernel_sample(kingman, 1.0, 2.0, rng);
  });
  bench("kendall stable draw", 2000000, [&](gconv::RngStream& rng) {
    return gconv::stable_sample(kendall, 0.5, rng);
  });
  bench("one-sided stable draw", 2000000, [&](gconv::RngStream& rng) {
    return gconv::one_sided_stable(0.6, rng);
  });
  bench("compound poisson draw", 500000, [&](gconv::RngStream& rng) {
    return gconv::cpoisson_sample(
        gconv::CompoundPoissonSpec(kendall, 2.0, gconv::Measure::dirac(1.0)), rng);
  });
  const gconv::IncrementFamily family = gconv::stable_increment_family(kendall, 0.7);
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  bench("levy path (4 steps)", 200000, [&](gconv::RngStream& rng) {
    return gconv::simulate_levy(kendall, family, grid, rng).states.back();
  });
  const gconv::WeaklyStableLaw sphere = gconv::WeaklyStableLaw::sphere_uniform(3);
  bench("weak poisson path", 200000, [&](gconv::RngStream& rng) {
    return gconv::weak_poisson_path(sphere, 2.0, grid, rng).S.back();
  });
  return 0;
}
