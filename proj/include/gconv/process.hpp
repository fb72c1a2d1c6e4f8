#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gconv/gcf.hpp"
#include "gconv/infdiv.hpp"
#include "gconv/measure.hpp"

namespace gconv {

/// A simulated path: strictly increasing times with one state per time.
struct PathRecord {
  std::vector<double> times;
  std::vector<double> states;
};

/// Right-continuous step function on [0, t_n): value k on [t_{k-1}, t_k),
/// 0 outside. Breakpoints strictly increasing, first breakpoint is 0.
class StepFunction {
 public:
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);
  /// Parse "a1@[t0,t1);a2@[t1,t2)" with contiguous intervals.
  static StepFunction parse(const std::string& text);

  double operator()(double x) const;
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }
  double domain_end() const { return breaks_.back(); }

  /// Exact ∫_s^t g(f(x)) dx over the steps (f = 0 outside the domain).
  double integrate_of_value(double s, double t, const std::function<double(double)>& g) const;
  /// True if the two step functions agree as functions.
  bool same_function(const StepFunction& other) const;
  /// True if every breakpoint of this function appears in `grid`.
  bool refined_by(const std::vector<double>& grid) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

/// One transition draw: y from lambda, then the kernel fold of (x, y).
double transition_sample(const ConvSpec& spec, double x, const Measure& lambda, RngStream& rng);

/// A consistent family of increment laws dt -> lambda_dt. `sample` is the
/// hot path; `law` materializes the measure for callers that need one.
struct IncrementFamily {
  std::string name;
  std::function<double(double, RngStream&)> sample;
  std::function<Measure(double)> law;
};

/// Stable increments: dt -> scaled stable law (scale dt^{1/p}).
IncrementFamily stable_increment_family(const ConvSpec& spec, double p);
/// Compound Poisson increments: dt -> exponential of (dt * a * jump).
IncrementFamily cpoisson_increment_family(const ConvSpec& spec, double a, Measure jump);

/// Exponent-representation increments: the t^kappa part convolved with a
/// compound Poisson whose jump law is m(dx)/upsilon(x) truncated below the
/// eps_quantile of m. No small-jump compensation exists here, so the dropped
/// mass and the resulting bound on |log Phi| error are reported.
struct LkTruncation {
  double cut = 0.0;             // truncation point
  double dropped_mass = 0.0;    // m-mass below the cut
  double jump_intensity = 0.0;  // total of m/upsilon above the cut (per unit time)
  double log_phi_error = 0.0;   // sup over t in (0,4] of the dropped exponent
};
IncrementFamily lk_increment_family(const LevyTriple& triple, double eps_quantile = 1e-3,
                                    LkTruncation* report = nullptr);

/// Markov chain over the grid: X(grid[0]) = 0, then one kernel fold per step.
PathRecord simulate_levy(const ConvSpec& spec, const IncrementFamily& family,
                         const std::vector<double>& grid, RngStream& rng);

/// Two-route transition check: ECDFs of the one-step s->u law versus the
/// composed s->t->u law, compared at the given thresholds.
struct CkReport {
  std::vector<double> thresholds;
  std::vector<double> diffs;
  std::vector<double> sigmas;  // binomial sigma of the difference per threshold
  double max_abs_diff = 0.0;
  bool pass = false;  // every diff within 3 sigma
};
CkReport ck_check(const ConvSpec& spec, const IncrementFamily& family, double s, double t,
                  double u, double x, const std::vector<double>& thresholds, std::size_t n,
                  const RngStream& base);

/// Transform value of the weighted-integral process over [s,t] at u: the
/// step-weighted exponent with the inner dx-integral exact over steps and
/// the m-integral by quadrature.
double integral_process_gcf(const LevyTriple& triple, const StepFunction& f, double s, double t,
                            double u);

/// Path of the weighted-integral process: within a step of value a, the
/// increments are the base increments scaled by a. The grid must refine the
/// breakpoints of f.
PathRecord simulate_integral_process(const LevyTriple& triple, const StepFunction& f,
                                     const std::vector<double>& grid, RngStream& rng,
                                     double eps_quantile = 1e-3);

}  // namespace gconv
