#include "gconv/infdiv.hpp"

#include <cmath>
#include <map>

#include "gconv/errors.hpp"
#include "gconv/gcf.hpp"
#include "gconv/numeric.hpp"

namespace gconv {

CompoundPoissonSpec::CompoundPoissonSpec(ConvSpec s, double a, Measure j)
    : spec(s), intensity(a), jump(std::move(j)) {
  if (!(a > 0.0)) throw argument_error("compound Poisson intensity must be > 0");
  if (!jump.nonnegative_support()) {
    throw argument_error("compound Poisson jump law must live on [0, inf)");
  }
}

double cpoisson_sample(const CompoundPoissonSpec& cp, RngStream& rng) {
  const std::uint64_t n = rng.poisson(cp.intensity);
  double state = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double jump = cp.jump.sample(rng);
    state = kernel_sample(cp.spec, state, jump, rng);
  }
  return state;
}

std::size_t cpoisson_kmax(double intensity) {
  return static_cast<std::size_t>(std::ceil(intensity + 12.0 * std::sqrt(intensity) + 20.0));
}

namespace {

// log of e^{-a} a^k / k!
double log_poisson_weight(double a, std::size_t k) {
  return -a + static_cast<double>(k) * std::log(a) - std::lgamma(static_cast<double>(k) + 1.0);
}

// k-th Kendall power of a unit point mass: density a k(k-1) (1-u^{-a})^{k-2}
// u^{-2a-1} on (1, inf), k >= 2
FiniteMeasure kendall_unit_power(double alpha, std::size_t k, std::size_t grid_points) {
  const double tail_q = 1e-10;
  // mass beyond U is ~ k (k-1)/(2) U^{-2a}-ish; just take a generous cut
  const double cut = std::pow(tail_q / (static_cast<double>(k * k)), -1.0 / (2.0 * alpha));
  std::vector<double> grid = num::log_grid(1.0, cut, grid_points);
  std::vector<double> vals(grid.size());
  const double kk = static_cast<double>(k);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double u = grid[i];
    const double base = 1.0 - std::pow(u, -alpha);
    vals[i] = alpha * kk * (kk - 1.0) * std::pow(base, kk - 2.0) * std::pow(u, -2.0 * alpha - 1.0);
  }
  FiniteMeasure fm;
  fm.add_density(grid, vals, 1.0, 0.0);
  fm.normalize();  // unit mass; the analytic tail is folded in
  return fm;
}

// atomic k-fold convolution powers for the algebras whose kernels keep atoms
std::vector<FiniteMeasure> atomic_powers(const ConvSpec& spec, const std::vector<Atom>& jump,
                                         std::size_t k_max) {
  std::vector<FiniteMeasure> powers(k_max + 1);
  powers[0] = FiniteMeasure::point_mass(0.0, 1.0);
  std::map<double, double> current{{0.0, 1.0}};
  for (std::size_t k = 1; k <= k_max; ++k) {
    std::map<double, double> next;
    for (const auto& [x, wx] : current) {
      for (const Atom& j : jump) {
        double point = 0.0;
        switch (spec.kind()) {
          case ConvKind::Classic:
            point = x + j.point;
            break;
          case ConvKind::Max:
            point = std::max(x, j.point);
            break;
          case ConvKind::PStable:
            point = std::pow(std::pow(x, spec.p()) + std::pow(j.point, spec.p()), 1.0 / spec.p());
            break;
          default:
            throw unsupported_error("atomic powers only for Classic/PStable/Max");
        }
        next[point] += wx * j.weight;
      }
    }
    // merge near-duplicates introduced by rounding
    current.clear();
    for (const auto& [x, w] : next) {
      if (!current.empty()) {
        auto last = std::prev(current.end());
        if (x - last->first < 1e-12 * std::max(1.0, std::abs(x))) {
          last->second += w;
          continue;
        }
      }
      current[x] = w;
    }
    for (const auto& [x, w] : current) powers[k].add_atom(x, w);
  }
  return powers;
}

// k-fold powers of delta_1 under the symmetric algebra: the folded walk
// |k - 2j|^{1/alpha} with binomial weights
FiniteMeasure symmetric_unit_power(double alpha, std::size_t k) {
  FiniteMeasure fm;
  double logw = -static_cast<double>(k) * std::log(2.0);  // C(k,0)/2^k
  for (std::size_t j = 0; j <= k; ++j) {
    const double site = std::abs(static_cast<double>(k) - 2.0 * static_cast<double>(j));
    fm.add_atom(std::pow(site, 1.0 / alpha), std::exp(logw));
    logw += std::log(static_cast<double>(k - j)) - std::log(static_cast<double>(j + 1));
  }
  fm.tidy_atoms();
  return fm;
}

}  // namespace

CpoissonMeasure cpoisson_measure(const CompoundPoissonSpec& cp, std::size_t k_max) {
  if (!cp.jump.closed_form() || !cp.jump.components().grid().empty()) {
    throw unsupported_error(
        "cpoisson_measure needs an atomic jump law; fall back to cpoisson_sample");
  }
  const auto& atoms = cp.jump.components().atoms();
  const double a = cp.intensity;
  std::vector<double> tail_terms;
  double trunc = 1.0;
  for (std::size_t k = 0; k <= k_max; ++k) trunc -= std::exp(log_poisson_weight(a, k));
  trunc = std::max(trunc, 0.0);

  FiniteMeasure series;
  const bool single_atom = atoms.size() == 1;
  switch (cp.spec.kind()) {
    case ConvKind::Classic:
    case ConvKind::PStable:
    case ConvKind::Max: {
      const auto powers = atomic_powers(cp.spec, atoms, k_max);
      for (std::size_t k = 0; k <= k_max; ++k) {
        series.add(powers[k], std::exp(log_poisson_weight(a, k)));
      }
      break;
    }
    case ConvKind::Kendall: {
      if (!single_atom) {
        throw unsupported_error(
            "Kendall cpoisson_measure needs a single-atom jump; fall back to cpoisson_sample");
      }
      const double c = atoms[0].point;
      series.add_atom(0.0, std::exp(log_poisson_weight(a, 0)));
      if (k_max >= 1 && c > 0.0) series.add_atom(c, std::exp(log_poisson_weight(a, 1)));
      if (c > 0.0) {
        for (std::size_t k = 2; k <= k_max; ++k) {
          FiniteMeasure part = kendall_unit_power(cp.spec.alpha(), k, 4096);
          series.add(part.scaled_by(c), std::exp(log_poisson_weight(a, k)));
        }
      } else {
        // zero jump collapses the whole series onto the origin
        series = FiniteMeasure::point_mass(0.0, 1.0 - trunc);
      }
      break;
    }
    case ConvKind::SymmetricAlpha: {
      if (!single_atom) {
        throw unsupported_error(
            "symmetric cpoisson_measure needs a single-atom jump; fall back to cpoisson_sample");
      }
      const double c = atoms[0].point;
      for (std::size_t k = 0; k <= k_max; ++k) {
        FiniteMeasure part = symmetric_unit_power(cp.spec.alpha(), k);
        if (c > 0.0) part = part.scaled_by(c);
        series.add(part, std::exp(log_poisson_weight(a, k)));
      }
      break;
    }
    case ConvKind::Kingman:
      throw unsupported_error(
          "Kingman cpoisson_measure has no closed powers; fall back to cpoisson_sample");
  }
  series.normalize();
  return {Measure::mixture(std::move(series)), trunc};
}

double conv_power_gcf(const ConvSpec& spec, const Measure& lambda, double r, double t) {
  if (!(r >= 0.0)) throw argument_error("conv_power_gcf: r must be >= 0");
  if (r == 0.0) return 1.0;
  const GcfValue base = gcf(spec, lambda, t);
  if (!(base.value > 0.0)) {
    throw numeric_error("conv_power_gcf: nonpositive base " + format_double(base.value) +
                        " at t=" + format_double(t) +
                        "; the law is not infinitely divisible there or the MC estimate is noise");
  }
  return std::pow(base.value, r);
}

double kingman_weak_poisson_cf(double c, double t) {
  if (!(c > 0.0)) throw argument_error("kingman_weak_poisson_cf: c must be > 0");
  const double oms = num::one_minus_sinc(t);
  const double s = 1.0 - oms;  // sin t / t with its limit at 0
  return std::exp(-c * oms) * (1.0 - c * s + c * std::cos(t));
}

}  // namespace gconv
