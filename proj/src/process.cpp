#include "gconv/process.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "gconv/errors.hpp"
#include "gconv/numeric.hpp"
#include "gconv/parallel.hpp"

namespace gconv {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breaks_(std::move(breakpoints)), values_(std::move(values)) {
  if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size()) {
    throw argument_error("step function needs n+1 breakpoints for n values");
  }
  if (breaks_.front() != 0.0) throw argument_error("step function domain starts at 0");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    if (!(breaks_[i] < breaks_[i + 1])) {
      throw argument_error("step function breakpoints must be strictly increasing");
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw argument_error("step function values must be finite");
  }
}

StepFunction StepFunction::parse(const std::string& text) {
  // pieces like a@[s,t) separated by ';'
  std::vector<double> breaks, values;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ';')) {
    const auto at = piece.find('@');
    if (at == std::string::npos || piece.size() < at + 6 || piece[at + 1] != '[' ||
        piece.back() != ')') {
      throw argument_error("bad step piece '" + piece + "', expected a@[s,t)");
    }
    const std::string range = piece.substr(at + 2, piece.size() - at - 3);
    const auto comma = range.find(',');
    if (comma == std::string::npos) throw argument_error("bad step range '" + range + "'");
    double value = 0.0, lo = 0.0, hi = 0.0;
    try {
      value = std::stod(piece.substr(0, at));
      lo = std::stod(range.substr(0, comma));
      hi = std::stod(range.substr(comma + 1));
    } catch (const std::exception&) {
      throw argument_error("bad number in step piece '" + piece + "'");
    }
    if (breaks.empty()) {
      breaks.push_back(lo);
    } else if (std::abs(breaks.back() - lo) > 1e-12) {
      throw argument_error("step pieces must be contiguous");
    }
    breaks.push_back(hi);
    values.push_back(value);
  }
  return StepFunction(std::move(breaks), std::move(values));
}

double StepFunction::operator()(double x) const {
  if (x < breaks_.front() || x >= breaks_.back()) return 0.0;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double StepFunction::integrate_of_value(double s, double t,
                                        const std::function<double(double)>& g) const {
  if (!(s <= t)) throw argument_error("integrate_of_value: need s <= t");
  double acc = 0.0;
  // the pieces of the function, extended by value 0 outside the domain
  double lo = s;
  while (lo < t) {
    const double v = (*this)(lo);
    // next breakpoint strictly above lo
    double hi = t;
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), lo);
    if (it != breaks_.end()) hi = std::min(hi, *it);
    if (lo >= breaks_.back()) hi = t;
    acc += g(v) * (hi - lo);
    lo = hi;
  }
  return acc;
}

bool StepFunction::same_function(const StepFunction& other) const {
  std::vector<double> pts = num::merge_grids(breaks_, other.breaks_);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double mid = 0.5 * (pts[i] + pts[i + 1]);
    if (std::abs((*this)(mid) - other(mid)) > 1e-12) return false;
  }
  const double beyond = std::max(domain_end(), other.domain_end()) + 1.0;
  return std::abs((*this)(beyond) - other(beyond)) < 1e-12;
}

bool StepFunction::refined_by(const std::vector<double>& grid) const {
  for (double b : breaks_) {
    bool found = false;
    for (double g : grid) {
      if (std::abs(g - b) <= 1e-12 * std::max(1.0, std::abs(b))) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

double transition_sample(const ConvSpec& spec, double x, const Measure& lambda, RngStream& rng) {
  if (!(x >= 0.0)) throw argument_error("transition_sample: x must be >= 0");
  const double y = lambda.sample(rng);
  return kernel_sample(spec, x, y, rng);
}

IncrementFamily stable_increment_family(const ConvSpec& spec, double p) {
  if (!std::isfinite(p) || !(p > 0.0)) {
    throw argument_error("stable increment family needs finite p > 0");
  }
  IncrementFamily fam;
  fam.name = "stable:p=" + format_double(p) + "@" + spec.to_string();
  fam.sample = [spec, p](double dt, RngStream& rng) {
    return std::pow(dt, 1.0 / p) * stable_sample(spec, p, rng);
  };
  fam.law = [spec, p, name = fam.name](double dt) {
    return Measure::sampler_backed(
        [spec, p, dt](RngStream& rng) { return std::pow(dt, 1.0 / p) * stable_sample(spec, p, rng); },
        name);
  };
  return fam;
}

IncrementFamily cpoisson_increment_family(const ConvSpec& spec, double a, Measure jump) {
  if (!(a > 0.0)) throw argument_error("compound Poisson family needs a > 0");
  IncrementFamily fam;
  fam.name = "cpoisson:a=" + format_double(a) + "@" + spec.to_string();
  auto jump_shared = std::make_shared<Measure>(std::move(jump));
  fam.sample = [spec, a, jump_shared](double dt, RngStream& rng) {
    return cpoisson_sample(CompoundPoissonSpec(spec, a * dt, *jump_shared), rng);
  };
  fam.law = [spec, a, jump_shared, name = fam.name](double dt) {
    return Measure::sampler_backed(
        [spec, a, jump_shared, dt](RngStream& rng) {
          return cpoisson_sample(CompoundPoissonSpec(spec, a * dt, *jump_shared), rng);
        },
        name);
  };
  return fam;
}

IncrementFamily lk_increment_family(const LevyTriple& triple, double eps_quantile,
                                    LkTruncation* report) {
  if (!(eps_quantile >= 0.0) || !(eps_quantile < 1.0)) {
    throw argument_error("lk family: eps_quantile in [0,1)");
  }
  const ConvSpec spec = triple.spec();
  const double total = triple.m().total_mass();

  // truncation point: the eps quantile of m
  double cut = 0.0;
  if (total > 0.0 && eps_quantile > 0.0) {
    double lo = 0.0, hi = 1.0;
    const auto mass_below = [&](double x) { return triple.m().mass_below(x); };
    while (mass_below(hi) < eps_quantile * total && hi < 1e12) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (mass_below(mid) < eps_quantile * total ? lo : hi) = mid;
    }
    cut = hi;
  }

  // jump measure m(dx)/upsilon(x) above the cut
  const double x0 = triple.x0();
  const double om_x0 = 1.0 - omega(spec, x0);
  auto inv_upsilon = [spec, x0, om_x0](double x) {
    const double ups = x <= x0 ? 1.0 - omega(spec, x) : om_x0;
    return ups < 1e-300 ? 0.0 : 1.0 / ups;
  };
  FiniteMeasure jump_raw;
  for (const Atom& a : triple.m().atoms()) {
    if (a.point >= cut) jump_raw.add_atom(a.point, a.weight * inv_upsilon(a.point));
  }
  const auto& grid = triple.m().grid();
  const auto& dens = triple.m().density();
  if (!grid.empty()) {
    std::vector<double> g, v;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] >= cut) {
        g.push_back(grid[i]);
        v.push_back(dens[i] * inv_upsilon(grid[i]));
      }
    }
    if (g.size() >= 2) jump_raw.add_density(g, v, 1.0, triple.m().tail_mass() * inv_upsilon(g.back()));
  } else if (triple.m().tail_mass() > 0.0) {
    throw argument_error("lk family: m has tail mass but no grid");
  }

  const double intensity = jump_raw.total_mass();
  if (report != nullptr) {
    report->cut = cut;
    double atoms_at_cut = 0.0;
    for (const Atom& a : triple.m().atoms()) {
      if (a.point == cut) atoms_at_cut += a.weight;
    }
    report->dropped_mass = triple.m().mass_below(cut) - atoms_at_cut;
    report->jump_intensity = intensity;
    // dropped exponent: ∫_{(0,cut)} (1 - Omega(t x))/upsilon(x) m(dx), largest
    // over a reference range of t
    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      double acc = 0.0;
      for (const Atom& a : triple.m().atoms()) {
        if (a.point < cut) acc += a.weight * (1.0 - omega(spec, t * a.point)) * inv_upsilon(a.point);
      }
      if (!grid.empty() && grid.front() < cut) {
        std::vector<double> g, v;
        for (std::size_t i = 0; i < grid.size() && grid[i] <= cut; ++i) {
          g.push_back(grid[i]);
          v.push_back(dens[i] * (1.0 - omega(spec, t * grid[i])) * inv_upsilon(grid[i]));
        }
        if (g.size() >= 2) acc += num::trapezoid(g, v);
      }
      worst = std::max(worst, acc);
    }
    report->log_phi_error = worst;
  }

  Measure jump_law = intensity > 0.0 ? Measure::mixture(jump_raw.times(1.0 / intensity))
                                     : Measure::dirac(0.0);
  const double A = triple.A();
  const double k = kappa(spec);
  IncrementFamily fam;
  fam.name = "lk@" + spec.to_string();
  auto jump_shared = std::make_shared<Measure>(std::move(jump_law));
  fam.sample = [spec, A, k, intensity, jump_shared](double dt, RngStream& rng) {
    double state = 0.0;
    if (A > 0.0) state = std::pow(A * dt, 1.0 / k) * stable_sample(spec, k, rng);
    if (intensity > 0.0) {
      const double cp =
          cpoisson_sample(CompoundPoissonSpec(spec, intensity * dt, *jump_shared), rng);
      state = kernel_sample(spec, state, cp, rng);
    }
    return state;
  };
  fam.law = [fam_sample = fam.sample, name = fam.name](double dt) {
    return Measure::sampler_backed([fam_sample, dt](RngStream& rng) { return fam_sample(dt, rng); },
                                   name);
  };
  return fam;
}

PathRecord simulate_levy(const ConvSpec& spec, const IncrementFamily& family,
                         const std::vector<double>& grid, RngStream& rng) {
  if (grid.size() < 1) throw argument_error("simulate_levy: empty time grid");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i] < grid[i + 1])) throw argument_error("simulate_levy: grid must increase");
  }
  PathRecord path;
  path.times = grid;
  path.states.resize(grid.size());
  path.states[0] = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double inc = family.sample(grid[i] - grid[i - 1], rng);
    path.states[i] = kernel_sample(spec, path.states[i - 1], inc, rng);
  }
  return path;
}

CkReport ck_check(const ConvSpec& spec, const IncrementFamily& family, double s, double t,
                  double u, double x, const std::vector<double>& thresholds, std::size_t n,
                  const RngStream& base) {
  if (!(s < t) || !(t < u)) throw argument_error("ck_check: need s < t < u");
  std::vector<double> one_step = par::draw_batch(n, base.child(1), [&](RngStream& rng) {
    return kernel_sample(spec, x, family.sample(u - s, rng), rng);
  });
  std::vector<double> two_step = par::draw_batch(n, base.child(2), [&](RngStream& rng) {
    const double mid = kernel_sample(spec, x, family.sample(t - s, rng), rng);
    return kernel_sample(spec, mid, family.sample(u - t, rng), rng);
  });
  std::sort(one_step.begin(), one_step.end());
  std::sort(two_step.begin(), two_step.end());
  CkReport report;
  report.thresholds = thresholds;
  report.pass = true;
  const double nn = static_cast<double>(n);
  for (double thr : thresholds) {
    const double p1 =
        static_cast<double>(std::upper_bound(one_step.begin(), one_step.end(), thr) -
                            one_step.begin()) /
        nn;
    const double p2 =
        static_cast<double>(std::upper_bound(two_step.begin(), two_step.end(), thr) -
                            two_step.begin()) /
        nn;
    const double pooled = 0.5 * (p1 + p2);
    const double sigma = std::sqrt(std::max(pooled * (1.0 - pooled), 1e-12) * 2.0 / nn);
    const double diff = std::abs(p1 - p2);
    report.diffs.push_back(diff);
    report.sigmas.push_back(sigma);
    report.max_abs_diff = std::max(report.max_abs_diff, diff);
    if (diff > 3.0 * sigma) report.pass = false;
  }
  return report;
}

double integral_process_gcf(const LevyTriple& triple, const StepFunction& f, double s, double t,
                            double u) {
  if (!(u >= 0.0)) throw argument_error("integral_process_gcf: u must be >= 0");
  const ConvSpec spec = triple.spec();
  const double k = kappa(spec);
  const double stable_part =
      triple.A() * std::pow(u, k) * f.integrate_of_value(s, t, [k](double a) {
        return std::pow(a, k);
      });
  const double x0 = triple.x0();
  const double om_x0 = 1.0 - omega(spec, x0);
  auto integrand = [&](double x) {
    const double ups = x <= x0 ? 1.0 - omega(spec, x) : om_x0;
    if (ups < 1e-12) {
      return -f.integrate_of_value(s, t, [&](double a) { return std::pow(u * a, k); });
    }
    const double inner =
        f.integrate_of_value(s, t, [&](double a) { return 1.0 - omega(spec, u * a * x); });
    return -inner / ups;
  };
  const double jump_part = triple.m().integrate(integrand);
  const double exponent = -stable_part + jump_part;
  if (!std::isfinite(exponent)) {
    throw numeric_error("integral_process_gcf: divergent exponent at u=" + format_double(u));
  }
  return std::exp(exponent);
}

PathRecord simulate_integral_process(const LevyTriple& triple, const StepFunction& f,
                                     const std::vector<double>& grid, RngStream& rng,
                                     double eps_quantile) {
  if (!f.refined_by(grid)) {
    throw argument_error("simulate_integral_process: grid must refine the step breakpoints");
  }
  const ConvSpec spec = triple.spec();
  IncrementFamily base = lk_increment_family(triple, eps_quantile);
  PathRecord path;
  path.times = grid;
  path.states.resize(grid.size());
  path.states[0] = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double weight = f(0.5 * (grid[i - 1] + grid[i]));  // constant inside the cell
    double inc = 0.0;
    if (weight != 0.0) inc = weight * base.sample(grid[i] - grid[i - 1], rng);
    path.states[i] = kernel_sample(spec, path.states[i - 1], inc, rng);
  }
  return path;
}

}  // namespace gconv
