#pragma once

#include "gconv/convolution.hpp"
#include "gconv/measure.hpp"

namespace gconv {

/// Compound Poisson data: jump intensity a > 0 and a probability jump law.
struct CompoundPoissonSpec {
  ConvSpec spec;
  double intensity;
  Measure jump;

  CompoundPoissonSpec(ConvSpec s, double a, Measure j);
};

/// One draw: N ~ Poisson(a), then N jump draws folded through the kernel
/// starting from 0 (N = 0 gives 0). Fold order is left to right so a fixed
/// seed is reproducible; associativity makes the order irrelevant in law.
double cpoisson_sample(const CompoundPoissonSpec& cp, RngStream& rng);

struct CpoissonMeasure {
  Measure measure;
  double truncation_mass;  // Poisson tail beyond k_max, reported
};

/// The exponential series e^{-a} sum a^k/k! lambda^{<k>} truncated at k_max,
/// as an explicit mixture. Closed convolution powers exist for single-atom
/// jumps in every catalog algebra, and for general atomic jumps under
/// Classic/PStable/Max; other combinations raise unsupported_error telling
/// the caller to fall back to cpoisson_sample.
CpoissonMeasure cpoisson_measure(const CompoundPoissonSpec& cp, std::size_t k_max);

/// k_max making the truncation mass < 1e-12.
std::size_t cpoisson_kmax(double intensity);

/// gcf(lambda, t)^r, the convolution-power transform. The base must be
/// positive (a nonpositive Monte Carlo estimate raises a domain error).
double conv_power_gcf(const ConvSpec& spec, const Measure& lambda, double r, double t);

/// Characteristic function of the two-point-jump exponential in the
/// spherical algebra: e^{-c(1 - sin t/t)} (1 - c sin t/t + c cos t),
/// with the t -> 0 limit 1 taken by series.
double kingman_weak_poisson_cf(double c, double t);

}  // namespace gconv
