#pragma once

#include "gconv/process.hpp"
#include "gconv/weakmeasure.hpp"
#include "gconv/weakstable.hpp"

namespace gconv {

/// One draw of the step-function integral against the pair-valued random
/// measure: the weighted radial parts of the cells under the breakpoints of
/// f, folded through the representable pair. Weights enter through their
/// absolute value (the supported generators are symmetric, so the sign is
/// irrelevant in law). Deterministic given the stream.
double weak_integral_sample(const WeakRandomMeasureSpec& spec, const StepFunction& f,
                            RngStream& rng);

/// Same-function invariance across two partitions: KS of n draws built from
/// each representation. The refinement must agree with f as a function.
struct RefinementReport {
  double ks = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};
RefinementReport refinement_invariance_check(const WeakRandomMeasureSpec& spec,
                                             const StepFunction& f,
                                             const StepFunction& refinement, std::size_t n,
                                             const RngStream& base, double threshold = 0.015);

/// Characteristic function of I(f) * X: the closed form
///   exp{ -A|t|^kappa ∫|f|^kappa d rho - ∫∫ (1 - mu_cf(f(x) t s)) d rho nu(ds) },
/// with the rho-integrals exact sums over the steps.
double weak_integral_cf(const WeakLevyTriple& triple, const ControlMeasure& control,
                        const StepFunction& f, double t);

/// The exponent data of I(f): scale A ∫|f|^kappa d rho and spectral measure
/// sum_i rho(A_i) T_{a_i} nu over the nonzero steps.
WeakLevyTriple transported_triple(const WeakLevyTriple& triple, const ControlMeasure& control,
                                  const StepFunction& f);

}  // namespace gconv
