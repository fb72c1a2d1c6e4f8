#pragma once

#include <utility>
#include <vector>

#include "gconv/measure.hpp"
#include "gconv/weakstable.hpp"

namespace gconv {

/// Control measure on [0, inf): c * Lebesgue plus an optional finite part.
struct ControlMeasure {
  double lebesgue_c = 0.0;
  FiniteMeasure extra;

  static ControlMeasure lebesgue(double c);
  /// Mass of [lo, hi).
  double mass(double lo, double hi) const;
  bool is_lebesgue() const { return extra.empty(); }
};

/// The jump base lambda of an independently scattered pair measure, one of
/// the two families whose fractional powers are sampleable:
///  - compound Poisson: lambda = exponential of (a * delta_atom); powers thin
///    the Poisson intensity.
///  - stable: lambda = L(S_beta^{1/kappa(mu)}) for the one-sided S_beta
///    (Laplace e^{-t^beta}); its weak index is p = kappa(mu) * beta and
///    powers scale by r^{1/p}. Only the symmetric stable generator supports
///    this base; other generators are rejected rather than approximated.
class WeakJumpBase {
 public:
  static WeakJumpBase compound_poisson(double a, double atom = 1.0);
  static WeakJumpBase stable(double beta);

  bool is_stable() const { return stable_; }
  double intensity() const { return a_; }
  double atom() const { return atom_; }
  double beta() const { return beta_; }

 private:
  bool stable_ = false;
  double a_ = 0.0, atom_ = 1.0, beta_ = 0.0;
};

struct WeakRandomMeasureSpec {
  WeaklyStableLaw law;
  WeakJumpBase base;
  ControlMeasure control;

  WeakRandomMeasureSpec(WeaklyStableLaw l, WeakJumpBase b, ControlMeasure c);
};

/// One cell of an independently scattered pair measure: the radial part and
/// the generator direction, independent of each other; the classical-side
/// value is theta * y.
struct WeakCellDraw {
  double theta = 0.0;
  std::vector<double> y;
};

/// Evaluate the random measure on disjoint intervals [lo, hi); cells are
/// independent across the partition (one derived stream per cell).
std::vector<WeakCellDraw> weak_measure_eval(const WeakRandomMeasureSpec& spec,
                                            const std::vector<std::pair<double, double>>& cells,
                                            RngStream& rng);

/// Closed-form law of the unit-jump exponential at time t with intensity c:
/// lattice atoms for the symmetric stable generator, atom+density mixture
/// for KendallMu, and the uniform-convolution series for SphereUniform(3).
Measure weak_poisson_dist(const WeaklyStableLaw& law, double c, double t, std::size_t k_max);

/// Pathwise unit-jump process over the grid: S is the radial chain, Y the
/// associated classical process (one column per generator coordinate);
/// Y increments are a compound Poisson of generator jumps by construction.
struct WeakPoissonPath {
  std::vector<double> times;
  std::vector<double> S;
  std::vector<std::vector<double>> Y;
};

WeakPoissonPath weak_poisson_path(const WeaklyStableLaw& law, double c,
                                  const std::vector<double>& grid, RngStream& rng);

/// General associated-path builder for either jump base; used by the unit-jump
/// path and the subordination check.
WeakPoissonPath weak_additive_path(const WeakRandomMeasureSpec& spec,
                                   const std::vector<double>& grid, RngStream& rng);

/// Density of the n-fold self-convolution of the uniform law on [-1, 1]:
/// the alternating-binomial polynomial for n <= 30 (pairwise-summed),
/// a tabulated numerical self-convolution beyond.
double uniform_conv_power_density(std::size_t n, double x);

/// Remark-of-subordination equivalence check: terminal law of the associated
/// process with a stable base (indices alpha, beta) against direct symmetric
/// (alpha*beta)-stable samples. Returns the two-sample KS distance.
struct SubordinationReport {
  double ks = 0.0;
  std::size_t samples = 0;
};
SubordinationReport subordination_check(double alpha, double beta,
                                        const std::vector<double>& grid, std::size_t n,
                                        const RngStream& base);

}  // namespace gconv
