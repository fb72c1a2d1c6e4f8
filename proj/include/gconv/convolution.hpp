#pragma once

#include <string>

#include "gconv/measure.hpp"
#include "gconv/rng.hpp"

namespace gconv {

/// The catalog of generalized convolutions on laws over [0, inf).
enum class ConvKind { Classic, SymmetricAlpha, PStable, Kendall, Kingman, Max };

/// Identifies one algebra with its parameters. Validated on construction:
/// alpha > 0 (SymmetricAlpha, Kendall), p > 0 (PStable), s >= -1/2 (Kingman;
/// the boundary is the two-point mixing law).
class ConvSpec {
 public:
  static ConvSpec classic();
  static ConvSpec symmetric_alpha(double alpha);
  static ConvSpec pstable(double p);
  static ConvSpec kendall(double alpha);
  static ConvSpec kingman(double s);
  static ConvSpec max();

  /// Compact string form: classic | symmetric:a=1 | pstable:p=1.5 |
  /// kendall:a=0.7 | kingman:s=0.5 | max.
  static ConvSpec parse(const std::string& text);
  std::string to_string() const;

  ConvKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double p() const { return p_; }
  double s() const { return s_; }

 private:
  ConvSpec(ConvKind k, double alpha, double p, double s)
      : kind_(k), alpha_(alpha), p_(p), s_(s) {}
  ConvKind kind_;
  double alpha_, p_, s_;
};

/// The law of the point-mass convolution of x and y: a probability measure in
/// closed form (atoms, or atom+density mixtures for Kendall/Kingman).
Measure kernel_measure(const ConvSpec& spec, double x, double y);

/// One draw from the point-mass convolution of x and y.
double kernel_sample(const ConvSpec& spec, double x, double y, RngStream& rng);

/// The kernel of the generalized characteristic function; Omega(0) = 1,
/// |Omega| <= 1. Closed forms except Kingman, which is evaluated as the
/// cosine transform of its mixing density (the normalized Bessel kernel).
double omega(const ConvSpec& spec, double t);

/// Largest t where Omega(spec, u) is identically 0 for u >= t, or +inf when
/// the kernel has unbounded support. Integration routines split here.
double omega_support_end(const ConvSpec& spec);

/// Characteristic exponent of the algebra; +inf exactly for Max.
double kappa(const ConvSpec& spec);

/// Density of the standard stable law with exponent p, where a closed form
/// exists: Kendall p <= alpha, Max any finite p, Kingman p in {1,2} (Kingman
/// values follow the catalog's squared-variable convention; see stable_cdf
/// for laws of the variable itself). Anything else raises unsupported_error.
double stable_density(const ConvSpec& spec, double p, double x);

/// CDF of the standard stable law on the line, for the same closed-form set.
double stable_cdf(const ConvSpec& spec, double p, double x);

/// Draw from the standard stable law (characteristic function exp(-t^p)).
/// Supported: Kendall p <= alpha, Max finite p, Kingman p <= 2, PStable
/// p <= p', Classic p <= 1, SymmetricAlpha p <= 2 alpha.
double stable_sample(const ConvSpec& spec, double p, RngStream& rng);

/// Generalized convolution of two laws: exact mixture when both inputs are
/// atomic, otherwise an Empirical of n Monte Carlo kernel draws.
Measure convolve(const ConvSpec& spec, const Measure& a, const Measure& b, std::size_t n,
                 const RngStream& base);

/// One-sided stable variate, Laplace transform exp(-t^beta), beta in (0,1).
double one_sided_stable(double beta, RngStream& rng);

/// Symmetric stable variate, characteristic function exp(-|t|^p), p in (0,2].
double symmetric_stable(double p, RngStream& rng);

}  // namespace gconv
