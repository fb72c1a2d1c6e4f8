#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gconv/measure.hpp"
#include "gconv/rng.hpp"

namespace gconv {

enum class WeakKind { SymmetricStable, SphereUniform, KendallMu, TwoPoint };

/// One of the weakly stable generator laws:
///  - SymmetricStable(p), p in (0,2]: characteristic function exp(-|t|^p)
///    (unit-scale convention).
///  - SphereUniform(n), n >= 2: uniform law on the unit sphere of R^n.
///  - KendallMu(alpha), alpha in (0,1]: the law with cf (1 - |t|^alpha)+.
///  - TwoPoint: (delta_1 + delta_{-1})/2.
class WeaklyStableLaw {
 public:
  static WeaklyStableLaw symmetric_stable(double p);
  static WeaklyStableLaw sphere_uniform(int n);
  static WeaklyStableLaw kendall_mu(double alpha);
  static WeaklyStableLaw two_point();

  /// String forms: sas:p=1.5 | sphere:n=3 | kendallmu:a=1 | twopoint.
  static WeaklyStableLaw parse(const std::string& text);
  std::string to_string() const;

  WeakKind kind() const { return kind_; }
  double p() const { return p_; }
  int n() const { return n_; }
  double alpha() const { return alpha_; }
  /// Dimension of a draw (n for the sphere, 1 otherwise).
  std::size_t dim() const;
  /// Characteristic exponent: sup of finite absolute moments, capped at 2.
  double kappa() const;
  /// P(|X_1| > s) for the scalar projection; used for integrability bookkeeping.
  double tail(double s) const;

 private:
  WeaklyStableLaw(WeakKind k, double p, int n, double alpha)
      : kind_(k), p_(p), n_(n), alpha_(alpha) {}
  WeakKind kind_;
  double p_;
  int n_;
  double alpha_;
};

/// Characteristic function of the generator (first coordinate for the sphere).
double mu_cf(const WeaklyStableLaw& law, double t);

/// One draw of the generator vector.
std::vector<double> mu_sample(const WeaklyStableLaw& law, RngStream& rng);

/// The measurable pair (Theta, Chi) splitting s X + t Y = Theta * Chi with
/// Theta independent of Chi and Chi distributed like the generator. Supported
/// for TwoPoint, SymmetricStable and SphereUniform; KendallMu has no known
/// constructive pair and raises unsupported_error. The zero boundary
/// (s X + t Y = 0) maps Chi to the x-argument; a null event for the
/// continuous generators.
struct RepresentablePair {
  std::function<double(double, const std::vector<double>&, double, const std::vector<double>&)>
      theta;
  std::function<std::vector<double>(double, const std::vector<double>&, double,
                                    const std::vector<double>&)>
      chi;
};
RepresentablePair representable_pair(const WeaklyStableLaw& law);

/// Pathwise chain S_{n+1} = Theta(S_n, Chi_n; theta_{n+1}, X_{n+1}) with
/// Z_n = S_n Chi_n; Z_n equals the plain partial sum of theta_i X_i pointwise.
struct WeakSumChain {
  std::vector<double> S;
  std::vector<std::vector<double>> X;  // the running Chi states
  std::vector<std::vector<double>> Z;
};
WeakSumChain weak_sum_chain(const WeaklyStableLaw& law, const RepresentablePair& pair,
                            const std::vector<double>& thetas, RngStream& rng);

/// Exponent data of a weakly infinitely divisible law: scale A >= 0 and a
/// spectral measure nu stored on (0, inf) and integrated one-sided.
class WeakLevyTriple {
 public:
  WeakLevyTriple(WeaklyStableLaw law, double A, FiniteMeasure nu);
  const WeaklyStableLaw& law() const { return law_; }
  double A() const { return A_; }
  const FiniteMeasure& nu() const { return nu_; }
  /// ∫ P(|X| > s) nu(ds), finite by construction on the stored grid.
  double mu_tail_integral() const { return mu_tail_integral_; }

 private:
  WeaklyStableLaw law_;
  double A_;
  FiniteMeasure nu_;
  double mu_tail_integral_;
};

/// exp{ -A |t|^kappa - ∫ (1 - mu_cf(t s)) nu(ds) }.
double weak_lk_cf(const WeakLevyTriple& triple, double t);

}  // namespace gconv
