#pragma once

#include <array>
#include <cstdint>

namespace gconv {

/// Seedable random stream: identical (seed, stream) yields the identical draw
/// sequence on every platform, which is what the deterministic CLI contract
/// rests on. xoshiro256++ state, initialized through splitmix64; all variate
/// transforms are implemented here rather than via <random> distributions
/// (their sequences are implementation-defined).
///
/// Streams are cheap to construct. child(i) derives an independent stream;
/// deriving per work item is how batch/parallel code stays deterministic
/// regardless of the thread count.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Independent stream derived from this one's identity (not its position).
  RngStream child(std::uint64_t idx) const;

  std::uint64_t next_u64();

  /// Uniform on the open interval (0,1); never returns 0 or 1.
  double uniform();
  /// Standard normal (Box-Muller, second value cached).
  double normal();
  /// Exponential, mean 1.
  double exponential();
  /// Gamma(shape, scale). Marsaglia-Tsang; shape < 1 via the boost U^{1/a}.
  double gamma(double shape, double scale = 1.0);
  /// Beta(a, b) from two gammas.
  double beta(double a, double b);
  /// Poisson(mean). Inversion-by-multiplication in chunks; mean capped at 1e6.
  std::uint64_t poisson(double mean);

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  double normal_cache_ = 0.0;
  bool has_normal_cache_ = false;
};

}  // namespace gconv
