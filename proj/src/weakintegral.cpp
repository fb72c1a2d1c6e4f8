#include "gconv/weakintegral.hpp"

#include <cmath>

#include "gconv/errors.hpp"
#include "gconv/parallel.hpp"
#include "gconv/stats.hpp"

namespace gconv {

double weak_integral_sample(const WeakRandomMeasureSpec& spec, const StepFunction& f,
                            RngStream& rng) {
  std::vector<std::pair<double, double>> cells;
  const auto& breaks = f.breakpoints();
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) cells.push_back({breaks[i], breaks[i + 1]});
  const std::vector<WeakCellDraw> draws = weak_measure_eval(spec, cells, rng);
  const RepresentablePair pair = representable_pair(spec.law);
  double s = 0.0;
  std::vector<double> state;
  bool started = false;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double a = f.values()[i];
    const double weighted = std::abs(a) * draws[i].theta;
    if (!started) {
      s = weighted;
      state = draws[i].y;
      started = true;
      continue;
    }
    const double s_next = pair.theta(s, state, weighted, draws[i].y);
    state = pair.chi(s, state, weighted, draws[i].y);
    s = s_next;
  }
  return started ? s : 0.0;
}

RefinementReport refinement_invariance_check(const WeakRandomMeasureSpec& spec,
                                             const StepFunction& f,
                                             const StepFunction& refinement, std::size_t n,
                                             const RngStream& base, double threshold) {
  if (!f.same_function(refinement)) {
    throw argument_error("refinement_invariance_check: the partitions disagree as functions");
  }
  std::vector<double> coarse = par::draw_batch(n, base.child(1), [&](RngStream& rng) {
    return weak_integral_sample(spec, f, rng);
  });
  std::vector<double> fine = par::draw_batch(n, base.child(2), [&](RngStream& rng) {
    return weak_integral_sample(spec, refinement, rng);
  });
  merge_common_atoms(coarse, fine);
  RefinementReport report;
  report.samples = n;
  report.ks = ks_distance(coarse, fine);
  report.pass = report.ks < threshold;
  return report;
}

double weak_integral_cf(const WeakLevyTriple& triple, const ControlMeasure& control,
                        const StepFunction& f, double t) {
  const double k = triple.law().kappa();
  const auto& breaks = f.breakpoints();
  const auto& vals = f.values();
  double stable_part = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    stable_part += std::pow(std::abs(vals[i]), k) * control.mass(breaks[i], breaks[i + 1]);
  }
  double jump_part = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] == 0.0) continue;
    const double rho = control.mass(breaks[i], breaks[i + 1]);
    const double scale = std::abs(vals[i] * t);
    jump_part += rho * triple.nu().integrate(
                           [&](double s) { return 1.0 - mu_cf(triple.law(), scale * s); });
  }
  const double exponent = -triple.A() * std::pow(std::abs(t), k) * stable_part - jump_part;
  if (!std::isfinite(exponent)) {
    throw numeric_error("weak_integral_cf: divergent exponent at t=" + format_double(t));
  }
  return std::exp(exponent);
}

WeakLevyTriple transported_triple(const WeakLevyTriple& triple, const ControlMeasure& control,
                                  const StepFunction& f) {
  const double k = triple.law().kappa();
  const auto& breaks = f.breakpoints();
  const auto& vals = f.values();
  double a_scale = 0.0;
  FiniteMeasure nu;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double rho = control.mass(breaks[i], breaks[i + 1]);
    a_scale += std::pow(std::abs(vals[i]), k) * rho;
    if (vals[i] != 0.0 && rho > 0.0) {
      nu.add(triple.nu().scaled_by(std::abs(vals[i])), rho);
    }
  }
  return WeakLevyTriple(triple.law(), triple.A() * a_scale, std::move(nu));
}

}  // namespace gconv
