#pragma once

#include "gconv/convolution.hpp"
#include "gconv/measure.hpp"

namespace gconv {

/// A generalized characteristic function value; stderr_ is 0 for exact
/// (atomic/quadrature) evaluations and the Monte Carlo standard error
/// otherwise. Tolerance checks use 3 * stderr_ bands.
struct GcfValue {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// Phi_lambda(t) = ∫ Omega(t x) lambda(dx); exact sum for DiracMix,
/// quadrature for GridDensity/Mixture (integration split where Omega's
/// support ends), Monte Carlo mean over the stored sample for Empirical.
/// SamplerBacked input needs gcf_mc.
GcfValue gcf(const ConvSpec& spec, const Measure& lambda, double t);

/// Monte Carlo Phi estimate from n fresh draws (any measure kind).
GcfValue gcf_mc(const ConvSpec& spec, const Measure& lambda, double t, std::size_t n,
                const RngStream& base);

/// Truncated tail function of the exponent representation:
/// 1 - Omega(x) on [0, x0], constant 1 - Omega(x0) beyond. x0 must satisfy
/// Omega < 1 on (0, x0] (no such x0 exists for the Max algebra).
double upsilon(const ConvSpec& spec, double x, double x0);

/// Exponent data of an infinitely decomposable law: scale A >= 0 of t^kappa
/// plus a finite measure m integrated against (Omega(tx) - 1)/upsilon(x).
/// m must not charge 0 (the integrand is 0/0 there).
class LevyTriple {
 public:
  LevyTriple(ConvSpec spec, double A, FiniteMeasure m, double x0 = 1.0);
  const ConvSpec& spec() const { return spec_; }
  double A() const { return A_; }
  const FiniteMeasure& m() const { return m_; }
  double x0() const { return x0_; }

 private:
  ConvSpec spec_;
  double A_;
  FiniteMeasure m_;
  double x0_;
};

/// exp{ -A t^kappa + ∫ (Omega(tx)-1)/upsilon(x) m(dx) }.
double lk_gcf(const LevyTriple& triple, double t);

}  // namespace gconv
