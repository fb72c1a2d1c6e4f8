#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gconv/rng.hpp"

namespace gconv {

struct Atom {
  double point = 0.0;
  double weight = 0.0;
};

/// Finite Borel measure on the line: point masses plus a piecewise-linear
/// density tabulated on a sorted grid, plus an optional recorded tail mass
/// beyond the last grid point (measures with unbounded support are truncated
/// at a quantile and the cut mass is kept here so integrals can correct for it).
class FiniteMeasure {
 public:
  FiniteMeasure() = default;

  static FiniteMeasure point_mass(double x, double w);
  static FiniteMeasure from_atoms(std::vector<Atom> atoms);
  static FiniteMeasure from_density(std::vector<double> grid, std::vector<double> values,
                                    double tail_mass = 0.0);

  FiniteMeasure& add_atom(double x, double w);
  FiniteMeasure& add_density(const std::vector<double>& grid, const std::vector<double>& values,
                             double weight = 1.0, double tail_mass = 0.0);
  FiniteMeasure& add(const FiniteMeasure& other, double weight = 1.0);

  bool empty() const { return atoms_.empty() && grid_.empty() && tail_mass_ == 0.0; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& density() const { return density_; }
  double tail_mass() const { return tail_mass_; }

  double atom_mass() const;
  double density_mass() const;  // includes tail mass
  double total_mass() const { return atom_mass() + density_mass(); }

  /// ∫ g dm: exact over atoms, trapezoid over the density grid, tail mass
  /// attributed to the last grid point.
  double integrate(const std::function<double(double)>& g) const;
  /// m((-inf, x]); linear interpolation inside density cells.
  double mass_below(double x) const;

  /// Image under y = c*x (c > 0).
  FiniteMeasure scaled_by(double c) const;
  /// Same measure times a constant weight.
  FiniteMeasure times(double w) const;
  /// Image under |x| (atoms folded, density reflected onto the positive axis).
  FiniteMeasure abs_pushforward() const;

  /// Multiply every component so total mass becomes `target`.
  void normalize(double target = 1.0);
  /// Merge duplicate atom locations, drop zero weights, sort by point.
  void tidy_atoms();

 private:
  std::vector<Atom> atoms_;
  std::vector<double> grid_;
  std::vector<double> density_;
  double tail_mass_ = 0.0;
};

enum class MeasureKind { DiracMix, GridDensity, Mixture, SamplerBacked, Empirical };

/// Tagged representation of a probability law on the line.
///
///  - DiracMix:      finite list of atoms, weights >= 0 summing to 1 (1e-12).
///  - GridDensity:   nonnegative density on a sorted grid; normalized so that
///                   trapezoid integral + recorded tail mass is 1 (1e-6 gate).
///  - Mixture:       atoms plus a density component (Kendall kernels, compound
///                   Poisson closed forms).
///  - SamplerBacked: opaque draw procedure keyed by an RngStream.
///  - Empirical:     a concrete sample, >= 1 point.
///
/// Values are immutable after construction; all operations are const and pure
/// given an explicit RngStream, so distinct streams can run on distinct threads.
class Measure {
 public:
  using Sampler = std::function<double(RngStream&)>;

  static Measure dirac(double x);
  static Measure dirac_mix(std::vector<Atom> atoms);
  static Measure grid_density(std::vector<double> grid, std::vector<double> values,
                              double tail_mass = 0.0);
  /// Like grid_density but accepts any positive total mass and normalizes;
  /// for measures built from raw analytic formulas.
  static Measure grid_density_normalized(std::vector<double> grid, std::vector<double> values,
                                         double tail_mass = 0.0);
  static Measure mixture(FiniteMeasure components);
  static Measure sampler_backed(Sampler s, std::string label = "sampler");
  static Measure empirical(std::vector<double> samples);

  MeasureKind kind() const { return kind_; }
  bool closed_form() const {
    return kind_ == MeasureKind::DiracMix || kind_ == MeasureKind::GridDensity ||
           kind_ == MeasureKind::Mixture;
  }

  /// Closed-form kinds only.
  const FiniteMeasure& components() const;
  const std::vector<double>& samples() const;  // Empirical only
  const std::string& label() const { return label_; }

  double cdf(double x) const;  // closed-form and Empirical
  double sample(RngStream& rng) const;
  /// n independent draws from per-index child streams of `base` (parallel;
  /// byte-identical to the serial reference).
  std::vector<double> sample_n(std::size_t n, const RngStream& base) const;

  /// True if every atom and the density support sit in [0, inf).
  bool nonnegative_support() const;

  void write_csv(std::ostream& os) const;
  static Measure read_csv(std::istream& is);

 private:
  Measure() = default;
  MeasureKind kind_ = MeasureKind::DiracMix;
  FiniteMeasure fm_;
  std::vector<double> samples_;
  Sampler sampler_;
  std::string label_;
};

/// ∫ g dm. Exact weighted sum for DiracMix, composite trapezoid (with tail
/// correction) for GridDensity/Mixture, sample mean for Empirical.
/// SamplerBacked input is rejected: materialize an Empirical first.
double quadrature(const Measure& m, const std::function<double(double)>& g);

/// Convenience: Empirical measure of n draws.
Measure materialize(const Measure& m, std::size_t n, const RngStream& base);

std::string format_double(double v);

}  // namespace gconv
