#include "gconv/gcf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gconv/errors.hpp"
#include "gconv/numeric.hpp"
#include "gconv/stats.hpp"

namespace gconv {

namespace {

// ∫ Omega(t x) f(x) dx over the tabulated density. When Omega has compact
// support the integration stops at x = end/t, splitting the straddling cell
// with the interpolated density value (Omega's one-sided limit from below
// is 1 for Max, 0 for Kendall, so the jump never lands inside a cell).
double density_part(const ConvSpec& spec, const std::vector<double>& grid,
                    const std::vector<double>& dens, double t) {
  if (grid.empty()) return 0.0;
  const double support_end = omega_support_end(spec);
  const double cutoff = std::isfinite(support_end) && t > 0.0
                            ? support_end / t
                            : std::numeric_limits<double>::infinity();
  std::vector<double> xs, ys;
  xs.reserve(grid.size() + 1);
  ys.reserve(grid.size() + 1);
  const bool max_kernel = spec.kind() == ConvKind::Max;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] > cutoff) {
      if (i > 0 && grid[i - 1] < cutoff) {
        const double f = dens[i - 1] + (dens[i] - dens[i - 1]) * (cutoff - grid[i - 1]) /
                                           (grid[i] - grid[i - 1]);
        xs.push_back(cutoff);
        ys.push_back(f * (max_kernel ? 1.0 : omega(spec, support_end)));
      }
      break;
    }
    xs.push_back(grid[i]);
    ys.push_back(dens[i] * (max_kernel && grid[i] == cutoff ? 1.0 : omega(spec, t * grid[i])));
  }
  if (xs.size() < 2) return 0.0;
  return num::trapezoid(xs, ys);
}

double closed_form_gcf(const ConvSpec& spec, const FiniteMeasure& fm, double t) {
  std::vector<double> parts;
  for (const Atom& a : fm.atoms()) parts.push_back(a.weight * omega(spec, t * a.point));
  parts.push_back(density_part(spec, fm.grid(), fm.density(), t));
  if (fm.tail_mass() > 0.0 && !fm.grid().empty()) {
    parts.push_back(fm.tail_mass() * omega(spec, t * fm.grid().back()));
  }
  return num::pairwise_sum(parts);
}

}  // namespace

GcfValue gcf(const ConvSpec& spec, const Measure& lambda, double t) {
  if (!(t >= 0.0)) throw argument_error("gcf: t must be >= 0");
  switch (lambda.kind()) {
    case MeasureKind::SamplerBacked:
      throw unsupported_error("gcf: sampler-backed measure needs gcf_mc");
    case MeasureKind::Empirical: {
      const auto& s = lambda.samples();
      std::vector<double> vals(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) vals[i] = omega(spec, t * s[i]);
      const MeanStderr ms = mean_stderr(vals);
      return {ms.mean, ms.stderr_};
    }
    default:
      if (t == 0.0) return {1.0, 0.0};  // Omega(0) = 1 against a probability law
      return {closed_form_gcf(spec, lambda.components(), t), 0.0};
  }
}

GcfValue gcf_mc(const ConvSpec& spec, const Measure& lambda, double t, std::size_t n,
                const RngStream& base) {
  if (!(t >= 0.0)) throw argument_error("gcf: t must be >= 0");
  std::vector<double> vals = lambda.sample_n(n, base);
  for (double& v : vals) v = omega(spec, t * v);
  const MeanStderr ms = mean_stderr(vals);
  return {ms.mean, ms.stderr_};
}

double upsilon(const ConvSpec& spec, double x, double x0) {
  if (!(x >= 0.0)) throw argument_error("upsilon: x must be >= 0");
  if (!(x0 > 0.0)) throw argument_error("upsilon: x0 must be > 0");
  // Omega must stay strictly below 1 on (0, x0]
  for (int k = 1; k <= 64; ++k) {
    const double u = x0 * static_cast<double>(k) / 64.0;
    if (!(omega(spec, u) < 1.0)) {
      throw argument_error("upsilon: Omega touches 1 inside (0, x0] for " + spec.to_string());
    }
  }
  return x <= x0 ? 1.0 - omega(spec, x) : 1.0 - omega(spec, x0);
}

LevyTriple::LevyTriple(ConvSpec spec, double A, FiniteMeasure m, double x0)
    : spec_(spec), A_(A), m_(std::move(m)), x0_(x0) {
  if (!(A >= 0.0)) throw argument_error("LevyTriple: A must be >= 0");
  if (!std::isfinite(m_.total_mass())) throw argument_error("LevyTriple: m must be finite");
  for (const Atom& a : m_.atoms()) {
    if (a.point == 0.0) throw argument_error("LevyTriple: m must not charge 0");
  }
  if (!m_.grid().empty() && m_.grid().front() < 0.0) {
    throw argument_error("LevyTriple: m lives on [0, inf)");
  }
  upsilon(spec_, 0.0, x0_);  // validates x0
}

double lk_gcf(const LevyTriple& triple, double t) {
  if (!(t >= 0.0)) throw argument_error("lk_gcf: t must be >= 0");
  const double k = kappa(triple.spec());
  const double om_x0 = 1.0 - omega(triple.spec(), triple.x0());
  auto integrand = [&](double x) {
    const double ups = x <= triple.x0() ? 1.0 - omega(triple.spec(), x) : om_x0;
    if (ups < 1e-12) {
      // x near 0: numerator and denominator vanish at the same rate
      return -std::pow(t, k);
    }
    return (omega(triple.spec(), t * x) - 1.0) / ups;
  };
  const double integral = triple.m().integrate(integrand);
  const double exponent = -triple.A() * std::pow(t, k) + integral;
  if (!std::isfinite(exponent)) {
    throw numeric_error("lk_gcf: divergent exponent at t=" + format_double(t) +
                        " (A=" + format_double(triple.A()) +
                        ", |m|=" + format_double(triple.m().total_mass()) + ")");
  }
  return std::exp(exponent);
}

}  // namespace gconv
