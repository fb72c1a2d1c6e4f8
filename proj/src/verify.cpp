#include "gconv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "gconv/convolution.hpp"
#include "gconv/errors.hpp"
#include "gconv/gcf.hpp"
#include "gconv/infdiv.hpp"
#include "gconv/measure.hpp"
#include "gconv/numeric.hpp"
#include "gconv/parallel.hpp"
#include "gconv/process.hpp"
#include "gconv/stats.hpp"
#include "gconv/weakintegral.hpp"
#include "gconv/weakmeasure.hpp"
#include "gconv/weakstable.hpp"

namespace gconv {

namespace {

// one sub-assertion of a check: value measured against its threshold
struct Part {
  double value;
  double threshold;
};

// collapse parts to the worst normalized ratio; a check passes when every
// part is inside its threshold
VerifyResult combine(const std::string& name, const std::vector<Part>& parts,
                     std::uint64_t samples, const std::string& note) {
  VerifyResult r;
  r.test = name;
  r.samples = samples;
  r.note = note;
  r.threshold = 1.0;
  r.statistic = 0.0;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const double ratio = parts[i].value / parts[i].threshold;
    if (ratio > r.statistic) {
      r.statistic = ratio;
      worst = i;
    }
  }
  r.pass = r.statistic <= 1.0;
  if (!parts.empty()) {
    r.note += " [worst part " + std::to_string(worst + 1) + "/" + std::to_string(parts.size()) +
              ": " + format_double(parts[worst].value) + " vs " +
              format_double(parts[worst].threshold) + "]";
  }
  return r;
}

std::vector<ConvSpec> catalog() {
  return {ConvSpec::classic(),      ConvSpec::symmetric_alpha(1.0), ConvSpec::pstable(1.5),
          ConvSpec::kendall(0.7),   ConvSpec::kingman(0.5),         ConvSpec::max()};
}

double normal_cdf(double x, double sigma) { return 0.5 * std::erfc(-x / (sigma * M_SQRT2)); }

// -- kernels ------------------------------------------------------------------

VerifyResult acc01_kernel_exactness(RngStream) {
  std::vector<Part> parts;
  auto atom_diff = [](const Measure& m, const std::vector<Atom>& expect) {
    const auto& atoms = m.components().atoms();
    if (atoms.size() != expect.size()) return 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      worst = std::max(worst, std::abs(atoms[i].point - expect[i].point));
      worst = std::max(worst, std::abs(atoms[i].weight - expect[i].weight));
    }
    return worst;
  };
  parts.push_back({atom_diff(kernel_measure(ConvSpec::pstable(2.0), 3.0, 4.0), {{5.0, 1.0}}),
                   1e-12});
  parts.push_back({atom_diff(kernel_measure(ConvSpec::symmetric_alpha(1.0), 1.0, 1.0),
                             {{0.0, 0.5}, {2.0, 0.5}}),
                   1e-12});
  parts.push_back({atom_diff(kernel_measure(ConvSpec::max(), 2.0, 3.0), {{3.0, 1.0}}), 1e-12});
  return combine("acc01_kernel_exactness", parts, 0, "point-mass kernels, exact atoms");
}

VerifyResult acc02_assoc_homogeneity(RngStream base) {
  constexpr std::size_t n = 200000;
  std::vector<Part> parts;
  std::size_t idx = 0;
  for (const ConvSpec& spec : catalog()) {
    const RngStream s1 = base.child(idx++);
    const RngStream s2 = base.child(idx++);
    std::vector<double> left = par::draw_batch(n, s1, [&](RngStream& rng) {
      return kernel_sample(spec, kernel_sample(spec, 1.0, 2.0, rng), 3.0, rng);
    });
    std::vector<double> right = par::draw_batch(n, s2, [&](RngStream& rng) {
      return kernel_sample(spec, 1.0, kernel_sample(spec, 2.0, 3.0, rng), rng);
    });
    merge_common_atoms(left, right);
    parts.push_back({ks_distance(left, right), 0.015});
    const RngStream s3 = base.child(idx++);
    const RngStream s4 = base.child(idx++);
    std::vector<double> scaled = par::draw_batch(n, s3, [&](RngStream& rng) {
      return 2.0 * kernel_sample(spec, 1.0, 2.0, rng);
    });
    std::vector<double> direct = par::draw_batch(n, s4, [&](RngStream& rng) {
      return kernel_sample(spec, 2.0, 4.0, rng);
    });
    merge_common_atoms(scaled, direct);
    parts.push_back({ks_distance(scaled, direct), 0.015});
  }
  return combine("acc02_assoc_homogeneity", parts, n,
                 "fold order and scale equivariance, all catalog members");
}

VerifyResult kernel_identity_and_commute(RngStream) {
  std::vector<Part> parts;
  for (const ConvSpec& spec : catalog()) {
    for (double x : {0.0, 0.7, 2.5}) {
      const Measure m = kernel_measure(spec, x, 0.0);
      const auto& atoms = m.components().atoms();
      const bool ok = atoms.size() == 1 && std::abs(atoms[0].point - x) <= 1e-12 &&
                      std::abs(atoms[0].weight - 1.0) <= 1e-12 && m.components().grid().empty();
      parts.push_back({ok ? 0.0 : 1.0, 0.5});
    }
    // commutativity through the cdf on a probe grid
    const Measure ab = kernel_measure(spec, 1.3, 2.1);
    const Measure ba = kernel_measure(spec, 2.1, 1.3);
    double worst = 0.0;
    for (double q : num::linear_grid(0.0, 6.0, 61)) {
      worst = std::max(worst, std::abs(ab.cdf(q) - ba.cdf(q)));
    }
    parts.push_back({worst, 1e-9});
  }
  return combine("kernel_identity_commute", parts, 0, "unit element and symmetry of the kernels");
}

VerifyResult kernel_sampler_matches_measure(RngStream base) {
  constexpr std::size_t n = 100000;
  std::vector<Part> parts;
  const struct {
    ConvSpec spec;
    double x, y;
  } cases[] = {{ConvSpec::kendall(1.0), 1.0, 1.0},
               {ConvSpec::kendall(0.7), 0.5, 2.0},
               {ConvSpec::kingman(0.5), 1.0, 2.0},
               {ConvSpec::kingman(2.0), 1.0, 1.0}};
  std::size_t idx = 0;
  for (const auto& c : cases) {
    const Measure exact = kernel_measure(c.spec, c.x, c.y);
    std::vector<double> draws = par::draw_batch(n, base.child(idx++), [&](RngStream& rng) {
      return kernel_sample(c.spec, c.x, c.y, rng);
    });
    std::vector<double> jumps;
    for (const Atom& a : exact.components().atoms()) jumps.push_back(a.point);
    parts.push_back({ks_distance_cdf(draws, [&](double v) { return exact.cdf(v); }, jumps), 0.01});
  }
  return combine("kernel_sampler_vs_measure", parts, n,
                 "direct kernel draws against the closed-form kernel law");
}

VerifyResult omega_bounds(RngStream) {
  std::vector<Part> parts;
  for (const ConvSpec& spec : catalog()) {
    parts.push_back({std::abs(omega(spec, 0.0) - 1.0), 1e-12});
    double worst = 0.0;
    for (double t : num::linear_grid(0.0, 50.0, 1001)) {
      worst = std::max(worst, std::abs(omega(spec, t)) - 1.0);
    }
    parts.push_back({worst, 1e-9});
  }
  return combine("omega_bounds", parts, 0, "Omega(0)=1 and |Omega| <= 1 on [0,50]");
}

// -- stable laws ----------------------------------------------------------------

Measure stable_density_grid(const ConvSpec& spec, double p) {
  // support grid wide enough that the recorded tail is ~1e-8 of the mass
  const double x_hi = std::pow(1e-8, -1.0 / p) * 2.0;
  const double x_lo = std::pow(690.0, -1.0 / p) * 0.5;
  std::vector<double> grid = num::log_grid(x_lo, x_hi, 1 << 15);
  // make the omega cutoff points land exactly on the grid
  grid = num::merge_grids(grid, {0.5, 1.0, 2.0, 4.0});
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = stable_density(spec, p, grid[i]);
  const double tail = 1.0 - stable_cdf(spec, p, x_hi);
  return Measure::grid_density_normalized(std::move(grid), std::move(vals), tail);
}

VerifyResult acc03_stable_gcf_identity(RngStream) {
  std::vector<Part> parts;
  const struct {
    ConvSpec spec;
    double p;
  } cases[] = {{ConvSpec::kendall(1.0), 0.5},
               {ConvSpec::kendall(1.0), 1.0},
               {ConvSpec::max(), 1.0}};
  for (const auto& c : cases) {
    const Measure density = stable_density_grid(c.spec, c.p);
    for (double t : {0.5, 1.0, 2.0}) {
      const double got = gcf(c.spec, density, t).value;
      parts.push_back({std::abs(got - std::exp(-std::pow(t, c.p))), 1e-5});
    }
  }
  return combine("acc03_stable_gcf_identity", parts, 0,
                 "transform of the closed-form stable densities equals exp(-t^p)");
}

VerifyResult stable_gcf_kingman(RngStream) {
  // squared-variable identities for the two closed forms, integrated in the
  // radius r = sqrt(v); the kernel oscillations fix the panel count
  std::vector<Part> parts;
  for (double s : {0.5, 1.0}) {
    const ConvSpec spec = ConvSpec::kingman(s);
    for (double t : {0.5, 1.0, 2.0}) {
      const std::size_t panels = 1 + static_cast<std::size_t>(50.0 * t);
      const double via_f1 = num::integrate_gl(
          [&](double r) {
            return omega(spec, t * r) * stable_density(spec, 1.0, r * r) * 2.0 * r;
          },
          0.0, 200.0, panels);
      parts.push_back({std::abs(via_f1 - std::exp(-t)), 1e-4});
      const double via_f2 = num::integrate_gl(
          [&](double r) {
            return omega(spec, t * std::sqrt(2.0) * r) * stable_density(spec, 2.0, r * r) * 2.0 *
                   r;
          },
          0.0, 60.0, panels);
      parts.push_back({std::abs(via_f2 - std::exp(-t * t)), 1e-5});
    }
  }
  return combine("stable_gcf_kingman", parts, 0,
                 "spherical-algebra stable forms: transform equals exp(-t^p)");
}

VerifyResult stable_sampler_ks(RngStream base) {
  constexpr std::size_t n = 100000;
  std::vector<Part> parts;
  const struct {
    ConvSpec spec;
    double p;
  } cases[] = {{ConvSpec::kendall(1.0), 1.0}, {ConvSpec::kendall(1.0), 0.5},
               {ConvSpec::kendall(0.7), 0.7}, {ConvSpec::max(), 1.0},
               {ConvSpec::kingman(0.5), 2.0}, {ConvSpec::kingman(0.5), 1.0}};
  std::size_t idx = 0;
  for (const auto& c : cases) {
    std::vector<double> draws = par::draw_batch(n, base.child(idx++), [&](RngStream& rng) {
      return stable_sample(c.spec, c.p, rng);
    });
    // tabulate the cdf once; the spherical p=1 form integrates per call
    const std::vector<double> knots = num::log_grid(1e-4, 1e8, 4096);
    std::vector<double> table(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) table[i] = stable_cdf(c.spec, c.p, knots[i]);
    auto cdf = [&](double x) {
      if (x <= knots.front()) return 0.0;
      if (x >= knots.back()) return 1.0;
      const auto it = std::upper_bound(knots.begin(), knots.end(), x);
      const std::size_t hi = static_cast<std::size_t>(it - knots.begin());
      const double w = (x - knots[hi - 1]) / (knots[hi] - knots[hi - 1]);
      return table[hi - 1] + w * (table[hi] - table[hi - 1]);
    };
    parts.push_back({ks_distance_cdf(draws, cdf), 0.01});
  }
  return combine("stable_sampler_ks", parts, n, "stable samplers against their closed-form CDFs");
}

VerifyResult stable_sampler_gcf_mc(RngStream base) {
  constexpr std::size_t n = 200000;
  std::vector<Part> parts;
  const struct {
    ConvSpec spec;
    double p;
  } cases[] = {{ConvSpec::pstable(1.5), 0.75},
               {ConvSpec::classic(), 0.5},
               {ConvSpec::symmetric_alpha(1.0), 1.0},
               {ConvSpec::symmetric_alpha(0.6), 0.9},
               {ConvSpec::kingman(1.0), 1.3}};
  std::size_t idx = 0;
  for (const auto& c : cases) {
    const Measure law = Measure::sampler_backed(
        [spec = c.spec, p = c.p](RngStream& rng) { return stable_sample(spec, p, rng); });
    for (double t : {0.5, 1.0, 2.0}) {
      const GcfValue got = gcf_mc(c.spec, law, t, n, base.child(idx++));
      const double want = std::exp(-std::pow(t, c.p));
      parts.push_back({std::abs(got.value - want), std::max(0.012, 5.0 * got.stderr_)});
    }
  }
  return combine("stable_sampler_gcf_mc", parts, n,
                 "Monte Carlo transform of sampled stable laws equals exp(-t^p)");
}

// -- gcf ------------------------------------------------------------------------

VerifyResult gcf_basics(RngStream) {
  std::vector<Part> parts;
  for (const ConvSpec& spec : catalog()) {
    for (double t : {0.3, 1.0, 2.5}) {
      parts.push_back(
          {std::abs(gcf(spec, Measure::dirac(1.0), t).value - omega(spec, t)), 1e-12});
      parts.push_back({std::abs(gcf(spec, Measure::dirac(0.0), t).value - 1.0), 1e-12});
    }
    parts.push_back({std::abs(gcf(spec, Measure::dirac(0.7), 0.0).value - 1.0), 0.0 + 1e-15});
  }
  // transform of the exponent-backed stable density: Kendall sigma_1 on a grid
  const ConvSpec kendall = ConvSpec::kendall(1.0);
  const Measure density = stable_density_grid(kendall, 1.0);
  for (double t : num::linear_grid(0.0, 3.0, 7)) {
    parts.push_back({std::abs(gcf(kendall, density, t).value - std::exp(-t)), 1e-5});
  }
  return combine("gcf_basics", parts, 0, "unit mass transforms and the exponential identity");
}

VerifyResult gcf_multiplicative(RngStream base) {
  constexpr std::size_t n = 200000;
  std::vector<Part> parts;
  std::size_t idx = 0;
  for (const ConvSpec& spec : catalog()) {
    const Measure l1 = Measure::dirac_mix({{0.5, 0.5}, {1.5, 0.5}});
    const Measure l2 = Measure::dirac(1.0);
    const Measure folded = convolve(spec, l1, l2, n, base.child(idx++));
    for (double t : {0.25, 0.5, 1.0, 2.0}) {
      const GcfValue lhs = gcf(spec, folded, t);
      const double rhs = gcf(spec, l1, t).value * gcf(spec, l2, t).value;
      parts.push_back({std::abs(lhs.value - rhs), std::max(3.0 * lhs.stderr_, 1e-4)});
    }
  }
  return combine("gcf_multiplicative", parts, n, "transform is multiplicative over convolve");
}

VerifyResult gcf_weak_convergence(RngStream) {
  // discretizations of the Kendall stable density converge uniformly
  const ConvSpec spec = ConvSpec::kendall(1.0);
  auto discretize = [&](std::size_t cells) {
    std::vector<Atom> atoms;
    const std::vector<double> edges = num::log_grid(1e-3, 1e4, cells + 1);
    double mass_acc = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double m = stable_cdf(spec, 1.0, edges[i + 1]) - stable_cdf(spec, 1.0, edges[i]);
      atoms.push_back({0.5 * (edges[i] + edges[i + 1]), m});
      mass_acc += m;
    }
    atoms.push_back({1e4, std::max(1.0 - mass_acc, 0.0)});
    return Measure::dirac_mix(atoms);
  };
  std::vector<Part> parts;
  double prev = 1.0;
  for (std::size_t cells : {64, 256, 1024}) {
    const Measure lam = discretize(cells);
    double sup = 0.0;
    for (double t : num::linear_grid(0.0, 3.0, 31)) {
      sup = std::max(sup, std::abs(gcf(spec, lam, t).value - std::exp(-t)));
    }
    parts.push_back({sup, prev});  // decreasing along refinements
    prev = sup;
  }
  parts.push_back({prev, 1e-3});  // and small at the finest level
  return combine("gcf_weak_convergence", parts, 0,
                 "transforms of discretized laws converge uniformly on [0,3]");
}

VerifyResult lk_gcf_checks(RngStream base) {
  std::vector<Part> parts;
  // pure power part
  const ConvSpec kendall = ConvSpec::kendall(0.7);
  const LevyTriple pure(kendall, 1.0, FiniteMeasure(), 1.0);
  for (double t : {0.3, 1.0, 2.0}) {
    parts.push_back(
        {std::abs(lk_gcf(pure, t) - std::exp(-std::pow(t, 0.7))), 1e-12});
  }
  // single atom: m = upsilon(1) delta_1 gives exp(Omega(t) - 1)
  for (const ConvSpec& spec : {ConvSpec::kendall(1.0), ConvSpec::classic(), ConvSpec::pstable(1.5)}) {
    const double u1 = upsilon(spec, 1.0, 1.0);
    const LevyTriple atom_triple(spec, 0.0, FiniteMeasure::point_mass(1.0, u1), 1.0);
    for (double t : {0.5, 1.0, 2.0}) {
      parts.push_back({std::abs(lk_gcf(atom_triple, t) - std::exp(omega(spec, t) - 1.0)), 1e-12});
    }
  }
  // cross-check against the exponential of a unit jump with intensity c
  const double c = 1.3;
  const ConvSpec spec = ConvSpec::kendall(1.0);
  const double u1 = upsilon(spec, 1.0, 1.0);
  const LevyTriple cp_triple(spec, 0.0, FiniteMeasure::point_mass(1.0, c * u1), 1.0);
  constexpr std::size_t n = 200000;
  const CompoundPoissonSpec cp(spec, c, Measure::dirac(1.0));
  const Measure draws = Measure::empirical(par::draw_batch(
      n, base.child(1), [&](RngStream& rng) { return cpoisson_sample(cp, rng); }));
  for (double t : {0.5, 1.0, 2.0}) {
    const GcfValue mc = gcf(spec, draws, t);
    parts.push_back({std::abs(mc.value - lk_gcf(cp_triple, t)), std::max(0.01, 3.0 * mc.stderr_)});
  }
  // bounds: values stay in (0,1] for the nonnegative kernels, and inside
  // [-1,1] for the oscillating ones
  double worst = 0.0;
  for (double t : num::linear_grid(0.0, 5.0, 101)) {
    const double v = lk_gcf(cp_triple, t);
    if (v <= 0.0 || v > 1.0) worst = 1.0;
  }
  parts.push_back({worst, 0.5});
  {
    const ConvSpec kingman = ConvSpec::kingman(0.5);
    const double u1 = upsilon(kingman, 1.0, 1.0);
    const LevyTriple osc(kingman, 0.2, FiniteMeasure::point_mass(1.0, 1.3 * u1), 1.0);
    double beyond = 0.0;
    for (double t : num::linear_grid(0.0, 20.0, 201)) {
      beyond = std::max(beyond, std::abs(lk_gcf(osc, t)) - 1.0);
    }
    parts.push_back({beyond, 1e-9});
  }
  return combine("lk_gcf_checks", parts, n, "exponent representation evaluator");
}

// -- compound Poisson ----------------------------------------------------------------

double kendall_cpoisson_cdf(double a, double u) {
  // unit jump, alpha = 1: atoms e^-a at 0 and a e^-a at 1, density beyond
  if (u < 0.0) return 0.0;
  if (u < 1.0) return std::exp(-a);
  return (1.0 + a / u) * std::exp(-a / u);
}

VerifyResult acc04_cpoisson_closed_forms(RngStream base) {
  constexpr std::size_t n = 100000;
  std::vector<Part> parts;
  // Kendall exponential against its displayed mixture
  const ConvSpec spec = ConvSpec::kendall(1.0);
  const CompoundPoissonSpec cp(spec, 2.0, Measure::dirac(1.0));
  std::vector<double> draws = par::draw_batch(
      n, base.child(1), [&](RngStream& rng) { return cpoisson_sample(cp, rng); });
  parts.push_back(
      {ks_distance_cdf(draws, [](double u) { return kendall_cpoisson_cdf(2.0, u); }, {0.0, 1.0}),
       0.01});
  // and the series mixture agrees with the same display
  const CpoissonMeasure series = cpoisson_measure(cp, cpoisson_kmax(2.0));
  double series_diff = 0.0;
  for (double u : num::log_grid(0.5, 50.0, 101)) {
    series_diff = std::max(series_diff,
                           std::abs(series.measure.cdf(u) - kendall_cpoisson_cdf(2.0, u)));
  }
  parts.push_back({series_diff, 1e-4});
  // lattice frequencies of the weak unit-jump exponential, ct = 2, p = 1
  const WeaklyStableLaw law = WeaklyStableLaw::symmetric_stable(1.0);
  std::vector<double> s_draws = par::draw_batch(n, base.child(2), [&](RngStream& rng) {
    return weak_poisson_path(law, 2.0, {0.0, 1.0}, rng).S.back();
  });
  for (int k = 0; k <= 6; ++k) {
    std::size_t count = 0;
    for (double v : s_draws) {
      if (std::abs(v - static_cast<double>(k)) < 1e-9) ++count;
    }
    const double want = std::exp(-2.0 + k * std::log(2.0) - std::lgamma(k + 1.0));
    const double sigma = std::sqrt(want * (1.0 - want) / static_cast<double>(n));
    parts.push_back(
        {std::abs(static_cast<double>(count) / static_cast<double>(n) - want), 3.0 * sigma});
  }
  return combine("acc04_cpoisson_closed_forms", parts, n,
                 "exponential mixtures: Kendall display and stable lattice");
}

VerifyResult cpoisson_exp_identity(RngStream base) {
  constexpr std::size_t n = 200000;
  std::vector<Part> parts;
  std::size_t idx = 0;
  for (const ConvSpec& spec : catalog()) {
    const double a = 1.5;
    const Measure jump = Measure::dirac(1.0);
    const CompoundPoissonSpec cp(spec, a, jump);
    const Measure draws = Measure::empirical(par::draw_batch(
        n, base.child(idx++), [&](RngStream& rng) { return cpoisson_sample(cp, rng); }));
    for (double t : {0.5, 1.0, 2.0}) {
      const GcfValue got = gcf(spec, draws, t);
      const double want = std::exp(a * (gcf(spec, jump, t).value - 1.0));
      parts.push_back({std::abs(got.value - want), std::max(0.012, 4.0 * got.stderr_)});
    }
  }
  return combine("cpoisson_exp_identity", parts, n,
                 "transform of the exponential equals exp(a (Phi - 1)) for every member");
}

VerifyResult cpoisson_semigroup(RngStream base) {
  constexpr std::size_t n = 200000;
  constexpr int folds = 4;
  std::vector<Part> parts;
  std::size_t idx = 0;
  for (const ConvSpec& spec :
       {ConvSpec::kendall(1.0), ConvSpec::max(), ConvSpec::pstable(1.5)}) {
    const double a = 2.0;
    const Measure jump = Measure::dirac(1.0);
    std::vector<double> whole = par::draw_batch(n, base.child(idx++), [&](RngStream& rng) {
      return cpoisson_sample(CompoundPoissonSpec(spec, a, jump), rng);
    });
    std::vector<double> split = par::draw_batch(n, base.child(idx++), [&](RngStream& rng) {
      double state = 0.0;
      for (int k = 0; k < folds; ++k) {
        const double piece = cpoisson_sample(CompoundPoissonSpec(spec, a / folds, jump), rng);
        state = kernel_sample(spec, state, piece, rng);
      }
      return state;
    });
    merge_common_atoms(whole, split);
    parts.push_back({ks_distance(whole, split), 0.015});
  }
  return combine("cpoisson_semigroup", parts, n, "n-fold split of the exponential matches in law");
}

VerifyResult cpoisson_truncation(RngStream) {
  std::vector<Part> parts;
  for (double a : {0.5, 2.0, 10.0, 40.0}) {
    const CpoissonMeasure m =
        cpoisson_measure(CompoundPoissonSpec(ConvSpec::pstable(1.0), a, Measure::dirac(1.0)),
                         cpoisson_kmax(a));
    parts.push_back({m.truncation_mass, 1e-12});
  }
  return combine("cpoisson_truncation", parts, 0, "series cut at k_max leaves < 1e-12 mass");
}

VerifyResult kingman_weak_cf_values(RngStream base) {
  std::vector<Part> parts;
  parts.push_back({std::abs(kingman_weak_poisson_cf(1.0, 1e-9) - 1.0), 1e-9});
  parts.push_back({std::abs(kingman_weak_poisson_cf(1.0, M_PI) - 0.0), 1e-12});
  constexpr std::size_t n = 1000000;
  const WeaklyStableLaw law = WeaklyStableLaw::sphere_uniform(3);
  std::vector<double> thetas = par::draw_batch(n, base.child(1), [&](RngStream& rng) {
    return weak_poisson_path(law, 2.0, {0.0, 1.0}, rng).S.back();
  });
  const MeanStderr got = empirical_cos_cf(thetas, 1.0);
  parts.push_back({std::abs(got.mean - kingman_weak_poisson_cf(2.0, 1.0)), 0.005});
  return combine("kingman_weak_cf_values", parts, n,
                 "two-point-jump exponential cf: limits and simulation");
}

// -- processes ---------------------------------------------------------------------

VerifyResult acc05_chapman_kolmogorov(RngStream base) {
  constexpr std::size_t n = 200000;
  std::vector<Part> parts;
  struct Case {
    ConvSpec spec;
    IncrementFamily family;
  };
  std::vector<Case> cases;
  cases.push_back({ConvSpec::kendall(1.0),
                   stable_increment_family(ConvSpec::kendall(1.0), 1.0)});
  cases.push_back({ConvSpec::max(), stable_increment_family(ConvSpec::max(), 1.0)});
  cases.push_back({ConvSpec::classic(),
                   cpoisson_increment_family(ConvSpec::classic(), 1.0, Measure::dirac(1.0))});
  std::size_t idx = 0;
  for (const auto& c : cases) {
    for (double x : {0.0, 1.0}) {
      // thresholds at five quantiles of a pilot run
      std::vector<double> pilot = par::draw_batch(4096, base.child(idx++), [&](RngStream& rng) {
        return kernel_sample(c.spec, x, c.family.sample(2.0, rng), rng);
      });
      std::sort(pilot.begin(), pilot.end());
      std::vector<double> thresholds;
      for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        thresholds.push_back(pilot[static_cast<std::size_t>(q * 4095.0)]);
      }
      const CkReport report =
          ck_check(c.spec, c.family, 0.0, 1.0, 2.0, x, thresholds, n, base.child(idx++));
      for (std::size_t i = 0; i < report.diffs.size(); ++i) {
        parts.push_back({report.diffs[i], 3.0 * report.sigmas[i]});
      }
    }
  }
  return combine("acc05_chapman_kolmogorov", parts, n,
                 "one-step vs two-step transition laws at 3 sigma");
}

VerifyResult acc06_integral_process(RngStream base) {
  constexpr std::size_t n = 100000;
  const ConvSpec spec = ConvSpec::kendall(1.0);
  const LevyTriple triple(spec, 1.0, FiniteMeasure(), 1.0);
  const StepFunction f({0.0, 1.0, 2.0}, {1.0, 2.0});
  const std::vector<double> grid{0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<double> terminal = par::draw_batch(n, base.child(1), [&](RngStream& rng) {
    return simulate_integral_process(triple, f, grid, rng).states.back();
  });
  std::vector<Part> parts;
  for (double u : {0.5, 1.0, 2.0}) {
    std::vector<double> vals(terminal.size());
    for (std::size_t i = 0; i < terminal.size(); ++i) vals[i] = omega(spec, u * terminal[i]);
    const MeanStderr got = mean_stderr(vals);
    const double want = integral_process_gcf(triple, f, 0.0, 2.0, u);
    parts.push_back({std::abs(got.mean - want), 3.0 * got.stderr_});
  }
  return combine("acc06_integral_process", parts, n,
                 "simulated weighted-integral transform matches the step formula");
}

VerifyResult levy_marginals(RngStream base) {
  constexpr std::size_t n = 100000;
  std::vector<Part> parts;
  const std::vector<double> grid{0.0, 0.5, 1.0, 1.5, 2.0};
  // max algebra, stable increments: terminal CDF e^{-2 x^-p}
  {
    const ConvSpec spec = ConvSpec::max();
    const IncrementFamily fam = stable_increment_family(spec, 1.0);
    std::vector<double> terminal = par::draw_batch(n, base.child(1), [&](RngStream& rng) {
      return simulate_levy(spec, fam, grid, rng).states.back();
    });
    parts.push_back(
        {ks_distance_cdf(terminal, [](double x) { return x > 0.0 ? std::exp(-2.0 / x) : 0.0; }), 0.01});
  }
  // kendall algebra: terminal is the scaled stable law
  {
    const ConvSpec spec = ConvSpec::kendall(1.0);
    const IncrementFamily fam = stable_increment_family(spec, 1.0);
    std::vector<double> terminal = par::draw_batch(n, base.child(2), [&](RngStream& rng) {
      return simulate_levy(spec, fam, grid, rng).states.back();
    });
    parts.push_back(
        {ks_distance_cdf(terminal, [&](double x) { return stable_cdf(spec, 1.0, x / 2.0); }),
         0.01});
  }
  // classic algebra with unit jumps: counting marginal
  {
    const ConvSpec spec = ConvSpec::classic();
    const IncrementFamily fam = cpoisson_increment_family(spec, 1.0, Measure::dirac(1.0));
    std::vector<double> terminal = par::draw_batch(n, base.child(3), [&](RngStream& rng) {
      return simulate_levy(spec, fam, grid, rng).states.back();
    });
    auto pois_cdf = [](double x) {
      double acc = 0.0;
      for (int k = 0; k <= static_cast<int>(std::floor(x)); ++k) {
        acc += std::exp(-2.0 + k * std::log(2.0) - std::lgamma(k + 1.0));
      }
      return x < 0.0 ? 0.0 : acc;
    };
    std::vector<double> jumps;
    for (int k = 0; k < 15; ++k) jumps.push_back(k);
    parts.push_back({ks_distance_cdf(terminal, pois_cdf, jumps), 0.01});
  }
  return combine("levy_marginals", parts, n, "closed-form marginals of the chain construction");
}

VerifyResult levy_paths_structure(RngStream base) {
  constexpr std::size_t paths = 2000;
  std::vector<Part> parts;
  const std::vector<double> grid = num::linear_grid(0.0, 2.0, 9);
  std::size_t idx = 0;
  // monotone states for the max and classic algebras
  for (const ConvSpec& spec : {ConvSpec::max(), ConvSpec::classic()}) {
    const IncrementFamily fam = spec.kind() == ConvKind::Max
                                    ? stable_increment_family(spec, 1.0)
                                    : cpoisson_increment_family(spec, 1.0, Measure::dirac(1.0));
    double violations = 0.0;
    for (std::size_t p = 0; p < paths; ++p) {
      RngStream rng = base.child(idx * 100000 + p);
      const PathRecord path = simulate_levy(spec, fam, grid, rng);
      for (std::size_t i = 1; i < path.states.size(); ++i) {
        if (path.states[i] < path.states[i - 1] - 1e-12) violations += 1.0;
      }
    }
    ++idx;
    parts.push_back({violations, 0.5});
  }
  // scale equivariance of the stable family
  constexpr std::size_t n = 100000;
  const ConvSpec spec = ConvSpec::kendall(0.7);
  const IncrementFamily fam = stable_increment_family(spec, 0.7);
  std::vector<double> scaled = par::draw_batch(n, base.child(901), [&](RngStream& rng) {
    return 2.0 * simulate_levy(spec, fam, grid, rng).states.back();
  });
  IncrementFamily scaled_fam;
  scaled_fam.name = "scaled";
  scaled_fam.sample = [&fam](double dt, RngStream& rng) { return 2.0 * fam.sample(dt, rng); };
  std::vector<double> direct = par::draw_batch(n, base.child(902), [&](RngStream& rng) {
    return simulate_levy(spec, scaled_fam, grid, rng).states.back();
  });
  parts.push_back({ks_distance(scaled, direct), 0.015});
  return combine("levy_paths_structure", parts, paths, "monotone members and scale equivariance");
}

VerifyResult lk_family_terminal_gcf(RngStream base) {
  constexpr std::size_t n = 200000;
  const ConvSpec spec = ConvSpec::kendall(1.0);
  // power part plus a two-atom jump measure
  FiniteMeasure m;
  m.add_atom(0.8, 0.3);
  m.add_atom(2.0, 0.2);
  const LevyTriple triple(spec, 0.4, std::move(m), 1.0);
  LkTruncation report;
  const IncrementFamily fam = lk_increment_family(triple, 0.0, &report);
  std::vector<Part> parts;
  parts.push_back({report.dropped_mass, 1e-12});  // atoms survive an eps=0 cut
  for (double t_time : {0.5, 1.0, 2.0}) {
    const std::vector<double> grid = num::linear_grid(0.0, t_time, 5);
    std::vector<double> terminal =
        par::draw_batch(n, base.child(static_cast<std::uint64_t>(t_time * 10)),
                        [&](RngStream& rng) { return simulate_levy(spec, fam, grid, rng).states.back(); });
    for (double u : {0.5, 1.0}) {
      std::vector<double> vals(terminal.size());
      for (std::size_t i = 0; i < terminal.size(); ++i) vals[i] = omega(spec, u * terminal[i]);
      const MeanStderr got = mean_stderr(vals);
      const double want = std::pow(lk_gcf(triple, u), t_time);
      parts.push_back({std::abs(got.mean - want), std::max(3.0 * got.stderr_, 1e-3)});
    }
  }
  return combine("lk_family_terminal_gcf", parts, n,
                 "exponent-representation increments reproduce the transform power");
}

// -- weak laws -------------------------------------------------------------------------

VerifyResult acc07_representability(RngStream base) {
  std::vector<Part> parts;
  const std::vector<WeaklyStableLaw> laws = {WeaklyStableLaw::two_point(),
                                             WeaklyStableLaw::symmetric_stable(2.0),
                                             WeaklyStableLaw::sphere_uniform(3)};
  std::size_t idx = 0;
  for (const WeaklyStableLaw& law : laws) {
    const RepresentablePair pair = representable_pair(law);
    RngStream rng = base.child(idx++);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double s = 3.0 * rng.uniform();
      const double t = 3.0 * rng.uniform();
      const std::vector<double> x = mu_sample(law, rng);
      const std::vector<double> y = mu_sample(law, rng);
      const double theta = pair.theta(s, x, t, y);
      const std::vector<double> chi = pair.chi(s, x, t, y);
      for (std::size_t d = 0; d < x.size(); ++d) {
        worst = std::max(worst, std::abs(s * x[d] + t * y[d] - theta * chi[d]));
      }
    }
    parts.push_back({worst, 1e-12});
  }
  // chi-marginal equals the generator law
  constexpr std::size_t n = 100000;
  {
    std::vector<double> chis = par::draw_batch(n, base.child(10), [&](RngStream& rng) {
      const WeaklyStableLaw law = WeaklyStableLaw::symmetric_stable(2.0);
      const RepresentablePair pair = representable_pair(law);
      return pair.chi(1.0, mu_sample(law, rng), 2.0, mu_sample(law, rng))[0];
    });
    parts.push_back({ks_distance_cdf(chis, [](double x) { return normal_cdf(x, M_SQRT2); }), 0.01});
  }
  {
    std::vector<double> chis = par::draw_batch(n, base.child(11), [&](RngStream& rng) {
      const WeaklyStableLaw law = WeaklyStableLaw::sphere_uniform(3);
      const RepresentablePair pair = representable_pair(law);
      return pair.chi(1.0, mu_sample(law, rng), 2.0, mu_sample(law, rng))[0];
    });
    parts.push_back({ks_distance_cdf(chis,
                                     [](double x) {
                                       return std::min(1.0, std::max(0.0, 0.5 * (x + 1.0)));
                                     }),
                     0.01});
  }
  {
    std::vector<double> chis = par::draw_batch(n, base.child(12), [&](RngStream& rng) {
      const WeaklyStableLaw law = WeaklyStableLaw::two_point();
      const RepresentablePair pair = representable_pair(law);
      return pair.chi(1.0, mu_sample(law, rng), 2.0, mu_sample(law, rng))[0];
    });
    double positive = 0.0;
    for (double v : chis) positive += v > 0.0 ? 1.0 : 0.0;
    parts.push_back({std::abs(positive / static_cast<double>(n) - 0.5), 0.01});
  }
  // the radial law of the spherical pair against the independent kernel route
  {
    std::vector<double> thetas = par::draw_batch(n, base.child(13), [&](RngStream& rng) {
      const WeaklyStableLaw law = WeaklyStableLaw::sphere_uniform(3);
      const RepresentablePair pair = representable_pair(law);
      return pair.theta(1.0, mu_sample(law, rng), 2.0, mu_sample(law, rng));
    });
    std::vector<double> kernel = par::draw_batch(n, base.child(14), [&](RngStream& rng) {
      return kernel_sample(ConvSpec::kingman(0.5), 1.0, 2.0, rng);
    });
    parts.push_back({ks_distance(thetas, kernel), 0.01});
  }
  return combine("acc07_representability", parts, n,
                 "pair identity to 1e-12, chi marginals, spherical radial oracle");
}

VerifyResult acc08_weak_poisson(RngStream base) {
  constexpr std::size_t n = 100000;
  std::vector<Part> parts;
  const WeaklyStableLaw sphere = WeaklyStableLaw::sphere_uniform(3);
  // classical-side marginal against the series density
  std::vector<double> y1 = par::draw_batch(n, base.child(1), [&](RngStream& rng) {
    return weak_poisson_path(sphere, 1.0, {0.0, 1.0}, rng).Y.back()[0];
  });
  const Measure series = [] {
    // marginal of the associated process: atom e^-ct at 0 plus the
    // convolution-power series of the uniform projection
    const double ct = 1.0;
    FiniteMeasure fm;
    fm.add_atom(0.0, std::exp(-ct));
    const std::size_t k_max = cpoisson_kmax(ct);
    std::vector<double> grid =
        num::linear_grid(-static_cast<double>(k_max) - 1.0, static_cast<double>(k_max) + 1.0, 4096);
    std::vector<double> vals(grid.size(), 0.0);
    for (std::size_t m = 1; m <= k_max; ++m) {
      const double w = std::exp(-ct + m * std::log(ct) - std::lgamma(m + 1.0));
      for (std::size_t i = 0; i < grid.size(); ++i) {
        vals[i] += w * uniform_conv_power_density(m, grid[i]);
      }
    }
    FiniteMeasure dens;
    dens.add_density(grid, vals, 1.0, 0.0);
    dens.normalize(1.0 - std::exp(-ct));
    fm.add(dens);
    return Measure::mixture(std::move(fm));
  }();
  parts.push_back(
      {ks_distance_cdf(y1, [&](double x) { return series.cdf(x); }, {0.0}), 0.015});
  // radial cf against the closed formula
  constexpr std::size_t n_cf = 1000000;
  std::vector<double> thetas = par::draw_batch(n_cf, base.child(2), [&](RngStream& rng) {
    return weak_poisson_path(sphere, 1.0, {0.0, 1.0}, rng).S.back();
  });
  for (double r : {0.5, 1.0, 2.0}) {
    const MeanStderr got = empirical_cos_cf(thetas, r);
    parts.push_back({std::abs(got.mean - kingman_weak_poisson_cf(1.0, r)), 0.005});
  }
  return combine("acc08_weak_poisson", parts, n_cf,
                 "unit-jump process: series density and radial cf");
}

VerifyResult weak_chain_laws(RngStream base) {
  constexpr std::size_t n = 100000;
  std::vector<Part> parts;
  // spherical chain with chi(d) radii is a Gaussian walk
  {
    const WeaklyStableLaw law = WeaklyStableLaw::sphere_uniform(3);
    std::vector<double> z = par::draw_batch(n, base.child(1), [&](RngStream& rng) {
      const RepresentablePair pair = representable_pair(law);
      std::vector<double> thetas(8);
      for (double& v : thetas) v = std::sqrt(2.0 * rng.gamma(1.5));  // chi(3)
      return weak_sum_chain(law, pair, thetas, rng).Z.back()[0];
    });
    parts.push_back(
        {ks_distance_cdf(z, [](double x) { return normal_cdf(x, std::sqrt(8.0)); }), 0.01});
  }
  // gaussian generator with subordinated radii gives the rotation-invariant
  // stable walk
  {
    const WeaklyStableLaw law = WeaklyStableLaw::symmetric_stable(2.0);
    std::vector<double> z = par::draw_batch(n, base.child(2), [&](RngStream& rng) {
      const RepresentablePair pair = representable_pair(law);
      std::vector<double> thetas(5);
      for (double& v : thetas) v = std::sqrt(one_sided_stable(0.5, rng));
      return weak_sum_chain(law, pair, thetas, rng).Z.back()[0];
    });
    parts.push_back({ks_distance_cdf(z,
                                     [](double x) {
                                       return 0.5 + std::atan(x / 5.0) / M_PI;  // 5-fold unit 1-stable
                                     }),
                     0.01});
  }
  // pointwise chain invariant Z_n = sum theta_i X_i
  {
    RngStream rng = base.child(3);
    const WeaklyStableLaw law = WeaklyStableLaw::sphere_uniform(4);
    const RepresentablePair pair = representable_pair(law);
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> thetas(6);
      for (double& v : thetas) v = 2.0 * rng.uniform();
      RngStream chain_rng = rng.child(rep);
      RngStream replay_rng = chain_rng;
      const WeakSumChain chain = weak_sum_chain(law, pair, thetas, chain_rng);
      std::vector<double> direct(law.dim(), 0.0);
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        const std::vector<double> x = mu_sample(law, replay_rng);
        for (std::size_t d = 0; d < direct.size(); ++d) direct[d] += thetas[i] * x[d];
      }
      for (std::size_t d = 0; d < direct.size(); ++d) {
        worst = std::max(worst, std::abs(chain.Z.back()[d] - direct[d]));
      }
    }
    parts.push_back({worst, 1e-12});
  }
  // zero coefficients collapse the chain
  {
    RngStream rng = base.child(4);
    const WeaklyStableLaw law = WeaklyStableLaw::symmetric_stable(1.5);
    const WeakSumChain chain = weak_sum_chain(law, representable_pair(law),
                                              std::vector<double>(5, 0.0), rng);
    parts.push_back({std::abs(chain.S.back()) + std::abs(chain.Z.back()[0]), 1e-15});
  }
  // associativity of the pair maps holds pointwise
  {
    RngStream rng = base.child(5);
    double worst = 0.0;
    for (const WeaklyStableLaw& law :
         {WeaklyStableLaw::symmetric_stable(1.2), WeaklyStableLaw::sphere_uniform(3),
          WeaklyStableLaw::two_point()}) {
      const RepresentablePair pair = representable_pair(law);
      for (int rep = 0; rep < 2000; ++rep) {
        const double s = 2.0 * rng.uniform(), t = 2.0 * rng.uniform(), u = 2.0 * rng.uniform();
        const auto x = mu_sample(law, rng), y = mu_sample(law, rng), z = mu_sample(law, rng);
        const double left =
            pair.theta(pair.theta(s, x, t, y), pair.chi(s, x, t, y), u, z);
        const double right =
            pair.theta(s, x, pair.theta(t, y, u, z), pair.chi(t, y, u, z));
        worst = std::max(worst, std::abs(left - right));
      }
    }
    parts.push_back({worst, 1e-10});
  }
  // square-summable radii stabilize the chain
  {
    constexpr std::size_t reps = 4000;
    const WeaklyStableLaw law = WeaklyStableLaw::sphere_uniform(3);
    std::vector<double> d32 = par::draw_batch(reps, base.child(6), [&](RngStream& rng) {
      const RepresentablePair pair = representable_pair(law);
      std::vector<double> thetas(64);
      for (std::size_t i = 0; i < thetas.size(); ++i) thetas[i] = 1.0 / static_cast<double>(i + 1);
      const WeakSumChain chain = weak_sum_chain(law, pair, thetas, rng);
      return std::abs(chain.S[63] - chain.S[31]);
    });
    std::vector<double> d256 = par::draw_batch(reps, base.child(7), [&](RngStream& rng) {
      const RepresentablePair pair = representable_pair(law);
      std::vector<double> thetas(512);
      for (std::size_t i = 0; i < thetas.size(); ++i) thetas[i] = 1.0 / static_cast<double>(i + 1);
      const WeakSumChain chain = weak_sum_chain(law, pair, thetas, rng);
      return std::abs(chain.S[511] - chain.S[255]);
    });
    const double m32 = mean_stderr(d32).mean;
    const double m256 = mean_stderr(d256).mean;
    parts.push_back({m32, 0.2});
    parts.push_back({m256, m32});  // contraction along the tail
  }
  return combine("weak_chain_laws", parts, n, "chain marginals, pointwise identity, stabilization");
}

VerifyResult weak_independence(RngStream base) {
  constexpr std::size_t n = 100000;
  std::vector<Part> parts;
  for (const WeaklyStableLaw& law :
       {WeaklyStableLaw::two_point(), WeaklyStableLaw::sphere_uniform(3)}) {
    const RepresentablePair pair = representable_pair(law);
    std::vector<double> thetas(n), chis(n);
    RngStream rng = base.child(law.kind() == WeakKind::SphereUniform ? 1 : 2);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = mu_sample(law, rng), y = mu_sample(law, rng);
      thetas[i] = pair.theta(1.0, x, 2.0, y);
      chis[i] = pair.chi(1.0, x, 2.0, y)[0];
    }
    std::vector<double> ts(thetas);
    std::sort(ts.begin(), ts.end());
    const double median = ts[n / 2];
    double joint = 0.0, p1 = 0.0, p2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool a = thetas[i] <= median;
      const bool b = chis[i] <= 0.0;
      joint += (a && b) ? 1.0 : 0.0;
      p1 += a ? 1.0 : 0.0;
      p2 += b ? 1.0 : 0.0;
    }
    joint /= n;
    p1 /= n;
    p2 /= n;
    const double corr_sigma = 0.5 * 0.5 / std::sqrt(static_cast<double>(n));
    parts.push_back({std::abs(joint - p1 * p2), 3.0 * corr_sigma});
  }
  return combine("weak_independence", parts, n,
                 "radial and directional parts are uncorrelated at 3 sigma");
}

VerifyResult weak_lk_identities(RngStream) {
  std::vector<Part> parts;
  // pure scale part
  for (double p : {0.8, 1.5, 2.0}) {
    const WeakLevyTriple triple(WeaklyStableLaw::symmetric_stable(p), 1.0, FiniteMeasure());
    for (double t : {0.5, 1.0, 2.0}) {
      parts.push_back(
          {std::abs(weak_lk_cf(triple, t) - std::exp(-std::pow(t, p))), 1e-12});
    }
  }
  // spectral density of the stable law inside the Kendall-generator algebra
  {
    const double alpha = 1.0, p = 0.5;
    std::vector<double> grid = num::log_grid(1e-10, 1e10, 1 << 15);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      vals[i] = p * (alpha - p) / alpha * std::pow(grid[i], -p - 1.0);
    }
    FiniteMeasure nu;
    // the tail above the grid integrates (1 - mu_cf) ~ 1, record it
    const double tail = p * (alpha - p) / alpha / p * std::pow(1e10, -p);
    nu.add_density(grid, vals, 1.0, tail);
    const WeakLevyTriple triple(WeaklyStableLaw::kendall_mu(alpha), 0.0, std::move(nu));
    for (double t : {0.5, 1.0, 2.0}) {
      parts.push_back(
          {std::abs(weak_lk_cf(triple, t) - std::exp(-std::pow(t, p))), 1e-3});
    }
  }
  // spherical spectral scale recovers the power law once calibrated
  {
    const double p = 1.2;
    const WeaklyStableLaw law = WeaklyStableLaw::sphere_uniform(3);
    std::vector<double> grid = num::log_grid(1e-8, 1e8, 1 << 14);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = std::pow(grid[i], -p - 1.0);
    FiniteMeasure raw;
    raw.add_density(grid, vals, 1.0, std::pow(1e8, -p) / p);
    const WeakLevyTriple probe(law, 0.0, raw.times(1.0));
    const double integral_at_1 = -std::log(weak_lk_cf(probe, 1.0));
    const double K = 1.0 / integral_at_1;
    const WeakLevyTriple calibrated(law, 0.0, raw.times(K));
    for (double t : {0.5, 2.0}) {
      parts.push_back({std::abs(-std::log(weak_lk_cf(calibrated, t)) - std::pow(t, p)) /
                           std::pow(t, p),
                       2e-3});
    }
  }
  return combine("weak_lk_identities", parts, 0,
                 "weak exponent representation against the displayed spectral identities");
}

VerifyResult mu_sampler_cf(RngStream base) {
  constexpr std::size_t n = 1000000;
  std::vector<Part> parts;
  {
    std::vector<double> draws = par::draw_batch(n, base.child(1), [&](RngStream& rng) {
      return mu_sample(WeaklyStableLaw::symmetric_stable(2.0), rng)[0];
    });
    const MeanStderr got = empirical_cos_cf(draws, 1.0);
    parts.push_back({std::abs(got.mean - std::exp(-1.0)), 0.005});
  }
  for (double alpha : {1.0, 0.6}) {
    std::vector<double> draws =
        par::draw_batch(n, base.child(alpha == 1.0 ? 2 : 3), [&](RngStream& rng) {
          return mu_sample(WeaklyStableLaw::kendall_mu(alpha), rng)[0];
        });
    for (double t : {0.25, 0.5, 0.75}) {
      const MeanStderr got = empirical_cos_cf(draws, t);
      parts.push_back(
          {std::abs(got.mean - mu_cf(WeaklyStableLaw::kendall_mu(alpha), t)), 0.005});
    }
  }
  {
    RngStream rng = base.child(4);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const std::vector<double> v = mu_sample(WeaklyStableLaw::sphere_uniform(5), rng);
      double norm2 = 0.0;
      for (double c : v) norm2 += c * c;
      worst = std::max(worst, std::abs(std::sqrt(norm2) - 1.0));
    }
    parts.push_back({worst, 1e-12});
  }
  return combine("mu_sampler_cf", parts, n, "generator samplers against their cfs");
}

VerifyResult weak_measure_cells(RngStream base) {
  std::vector<Part> parts;
  constexpr std::size_t n = 100000;
  const WeaklyStableLaw law = WeaklyStableLaw::symmetric_stable(2.0);
  const WeakRandomMeasureSpec spec(law, WeakJumpBase::compound_poisson(1.0),
                                   ControlMeasure::lebesgue(1.0));
  // additivity across a split cell
  std::vector<double> whole = par::draw_batch(n, base.child(1), [&](RngStream& rng) {
    return weak_measure_eval(spec, {{0.0, 2.0}}, rng)[0].theta;
  });
  std::vector<double> folded = par::draw_batch(n, base.child(2), [&](RngStream& rng) {
    const auto cells = weak_measure_eval(spec, {{0.0, 0.5}, {0.5, 2.0}}, rng);
    const RepresentablePair pair = representable_pair(law);
    return pair.theta(cells[0].theta, cells[0].y, cells[1].theta, cells[1].y);
  });
  merge_common_atoms(whole, folded);
  parts.push_back({ks_distance(whole, folded), 0.015});
  // independence across disjoint cells (indicator correlation at 3 sigma)
  {
    std::vector<double> a(n), b(n);
    RngStream rng = base.child(3);
    for (std::size_t i = 0; i < n; ++i) {
      const auto cells = weak_measure_eval(spec, {{0.0, 1.0}, {1.0, 2.0}}, rng);
      a[i] = cells[0].theta;
      b[i] = cells[1].theta;
    }
    double joint = 0.0, p1 = 0.0, p2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool ia = a[i] > 0.0;
      const bool ib = b[i] > 0.0;
      joint += (ia && ib) ? 1.0 : 0.0;
      p1 += ia ? 1.0 : 0.0;
      p2 += ib ? 1.0 : 0.0;
    }
    joint /= n;
    p1 /= n;
    p2 /= n;
    parts.push_back({std::abs(joint - p1 * p2), 3.0 * 0.25 / std::sqrt(static_cast<double>(n))});
  }
  // empty control mass gives the zero radial part
  {
    RngStream rng = base.child(4);
    WeakRandomMeasureSpec tiny(law, WeakJumpBase::compound_poisson(1e-12),
                               ControlMeasure::lebesgue(1e-12));
    const auto cells = weak_measure_eval(tiny, {{0.0, 1.0}}, rng);
    parts.push_back({std::abs(cells[0].theta), 1e-9});
  }
  // the direction marginal is the generator law (index-one generator: Cauchy)
  {
    const WeaklyStableLaw cauchy_law = WeaklyStableLaw::symmetric_stable(1.0);
    const WeakRandomMeasureSpec cspec(cauchy_law, WeakJumpBase::compound_poisson(1.0),
                                      ControlMeasure::lebesgue(1.0));
    std::vector<double> ys = par::draw_batch(n, base.child(5), [&](RngStream& rng) {
      return weak_measure_eval(cspec, {{0.0, 1.0}}, rng)[0].y[0];
    });
    parts.push_back(
        {ks_distance_cdf(ys, [](double x) { return 0.5 + std::atan(x) / M_PI; }), 0.01});
  }
  // stable-base cell values carry the scaled base law
  {
    const double beta = 0.6, alpha = 2.0, rho = 1.5;
    const WeakRandomMeasureSpec sspec(WeaklyStableLaw::symmetric_stable(alpha),
                                      WeakJumpBase::stable(beta), ControlMeasure::lebesgue(1.0));
    std::vector<double> cell = par::draw_batch(n, base.child(6), [&](RngStream& rng) {
      return weak_measure_eval(sspec, {{0.0, rho}}, rng)[0].theta;
    });
    std::vector<double> reference = par::draw_batch(n, base.child(7), [&](RngStream& rng) {
      return std::pow(rho, 1.0 / (alpha * beta)) *
             std::pow(one_sided_stable(beta, rng), 1.0 / alpha);
    });
    parts.push_back({ks_distance(cell, reference), 0.01});
  }
  // continuity at small times: exceedance probability decreases along dyadic dt
  {
    double prev = 1.0;
    for (int level = 0; level < 4; ++level) {
      const double dt = std::pow(2.0, -level);
      std::vector<double> draws =
          par::draw_batch(20000, base.child(10 + level), [&](RngStream& rng) {
            return weak_measure_eval(spec, {{0.0, dt}}, rng)[0].theta;
          });
      double exceed = 0.0;
      for (double v : draws) exceed += std::abs(v) > 0.5 ? 1.0 : 0.0;
      exceed /= static_cast<double>(draws.size());
      parts.push_back({exceed, prev + 0.02});
      prev = exceed;
    }
    parts.push_back({prev, 0.4});
  }
  return combine("weak_measure_cells", parts, n,
                 "independently scattered cells: additivity, independence, continuity");
}

VerifyResult weak_poisson_dist_checks(RngStream base) {
  std::vector<Part> parts;
  // lattice law of the stable generator
  {
    const Measure m = weak_poisson_dist(WeaklyStableLaw::symmetric_stable(1.0), 2.0, 1.0, 40);
    const auto& atoms = m.components().atoms();
    const double want = std::exp(-2.0 + 3.0 * std::log(2.0) - std::lgamma(4.0));
    double got = 0.0;
    for (const Atom& a : atoms) {
      if (std::abs(a.point - 3.0) < 1e-12) got = a.weight;
    }
    parts.push_back({std::abs(got - want), 1e-12});
  }
  // displayed density value of the Kendall-generator mixture
  {
    const Measure m = weak_poisson_dist(WeaklyStableLaw::kendall_mu(1.0), 1.0, 1.0, 40);
    const auto& fm = m.components();
    // interpolate the stored density at s = 2
    const auto& g = fm.grid();
    const auto& d = fm.density();
    double got = 0.0;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
      if (g[i] <= 2.0 && 2.0 <= g[i + 1]) {
        const double w = (2.0 - g[i]) / (g[i + 1] - g[i]);
        got = d[i] + w * (d[i + 1] - d[i]);
        break;
      }
    }
    const double want = 0.5 * 1.0 * std::pow(2.0, -3.0) * std::exp(-0.5);
    parts.push_back({std::abs(got - want), 1e-4});
    // vanishing intensity piles the mass at zero
    const Measure small = weak_poisson_dist(WeaklyStableLaw::kendall_mu(1.0), 1e-9, 1.0, 10);
    parts.push_back({std::abs(small.cdf(0.0) - small.cdf(-0.5) - 1.0), 1e-6});
  }
  // the symmetric Kendall mixture folds onto the positive-axis display
  {
    const double ct = 1.7;
    const Measure sym = weak_poisson_dist(WeaklyStableLaw::kendall_mu(1.0), ct, 1.0, 60);
    const CpoissonMeasure plus = cpoisson_measure(
        CompoundPoissonSpec(ConvSpec::kendall(1.0), ct, Measure::dirac(1.0)), 60);
    double worst = 0.0;
    for (double u : num::log_grid(0.3, 30.0, 64)) {
      const double folded = sym.cdf(u) - sym.cdf(-u) + (sym.cdf(-u) - sym.cdf(-u - 1e-9));
      worst = std::max(worst, std::abs(folded - plus.measure.cdf(u)));
    }
    parts.push_back({worst, 1e-4});
  }
  // Y increments of the weak unit-jump process are a compound Poisson of
  // generator jumps
  {
    constexpr std::size_t n = 1000000;
    const double c = 1.0, dt = 0.5;
    std::vector<double> incs = par::draw_batch(n, base.child(1), [&](RngStream& rng) {
      const auto path =
          weak_poisson_path(WeaklyStableLaw::symmetric_stable(2.0), c, {0.0, dt}, rng);
      return path.Y.back()[0];
    });
    const MeanStderr got = empirical_cos_cf(incs, 1.0);
    const double want = std::exp(-c * dt * (1.0 - std::exp(-1.0)));
    parts.push_back({std::abs(got.mean - want), 0.005});
  }
  return combine("weak_poisson_dist_checks", parts, 0,
                 "closed unit-jump laws and the associated classical increments");
}

VerifyResult uniform_power_checks(RngStream) {
  std::vector<Part> parts;
  parts.push_back({std::abs(uniform_conv_power_density(1, 0.0) - 0.5), 1e-12});
  parts.push_back({std::abs(uniform_conv_power_density(2, 0.0) - 0.5), 1e-12});
  parts.push_back({std::abs(uniform_conv_power_density(2, 1.5) - 0.125), 1e-12});
  parts.push_back({uniform_conv_power_density(5, 5.0), 1e-12});
  parts.push_back({uniform_conv_power_density(3, -7.0), 1e-12});
  // mass and symmetry at a closed-form order
  const double mass = num::integrate_gl(
      [](double x) { return uniform_conv_power_density(12, x); }, -12.0, 12.0, 24);
  parts.push_back({std::abs(mass - 1.0), 1e-9});
  parts.push_back({std::abs(uniform_conv_power_density(12, 1.25) -
                            uniform_conv_power_density(12, -1.25)),
                   1e-12});
  // the tabulated branch agrees with the gaussian limit at the center
  const double got = uniform_conv_power_density(36, 0.0);
  const double want = 1.0 / std::sqrt(2.0 * M_PI * 12.0);
  parts.push_back({std::abs(got - want) / want, 0.01});
  // and with its own closed form at the crossover
  const double got30 = uniform_conv_power_density(31, 0.7);
  const double closed30 = [&] {
    // one extra self-convolution of the closed form, by quadrature
    return 0.5 * num::integrate_gl(
                     [&](double y) { return uniform_conv_power_density(30, y); }, 0.7 - 1.0,
                     0.7 + 1.0, 8);
  }();
  parts.push_back({std::abs(got30 - closed30) / closed30, 0.01});
  return combine("uniform_power_checks", parts, 0,
                 "uniform convolution powers: values, support, mass, crossover");
}

// -- weak integrals -----------------------------------------------------------------

VerifyResult acc09_weak_integral(RngStream base) {
  constexpr std::size_t n = 100000;
  std::vector<Part> parts;
  // refinement invariance
  {
    const WeakRandomMeasureSpec spec(WeaklyStableLaw::symmetric_stable(2.0),
                                     WeakJumpBase::compound_poisson(1.0),
                                     ControlMeasure::lebesgue(1.0));
    const StepFunction coarse({0.0, 2.0}, {1.0});
    const StepFunction fine({0.0, 1.0, 2.0}, {1.0, 1.0});
    const RefinementReport r =
        refinement_invariance_check(spec, coarse, fine, n, base.child(1));
    parts.push_back({r.ks, 0.015});
  }
  {
    const WeakRandomMeasureSpec spec(WeaklyStableLaw::sphere_uniform(3),
                                     WeakJumpBase::compound_poisson(1.0),
                                     ControlMeasure::lebesgue(1.0));
    const StepFunction coarse({0.0, 1.0, 3.0}, {2.0, 1.0});
    const StepFunction fine({0.0, 0.5, 1.0, 1.5, 2.25, 3.0}, {2.0, 2.0, 1.0, 1.0, 1.0});
    const RefinementReport r =
        refinement_invariance_check(spec, coarse, fine, n, base.child(2));
    parts.push_back({r.ks, 0.015});
  }
  // cf formula against the simulated integral
  {
    constexpr std::size_t n_cf = 200000;
    const WeaklyStableLaw law = WeaklyStableLaw::symmetric_stable(2.0);
    const double beta = 0.8;
    const WeakRandomMeasureSpec spec(law, WeakJumpBase::compound_poisson(beta),
                                     ControlMeasure::lebesgue(1.0));
    const StepFunction f({0.0, 1.0, 2.0}, {1.0, 0.5});
    const WeakLevyTriple triple(law, 0.0, FiniteMeasure::point_mass(1.0, beta));
    std::vector<double> vals = par::draw_batch(n_cf, base.child(3), [&](RngStream& rng) {
      const double integral = weak_integral_sample(spec, f, rng);
      return integral * mu_sample(law, rng)[0];
    });
    for (double t : {0.5, 1.0, 2.0}) {
      const MeanStderr got = empirical_cos_cf(vals, t);
      const double want = weak_integral_cf(triple, ControlMeasure::lebesgue(1.0), f, t);
      parts.push_back({std::abs(got.mean - want), 3.0 * got.stderr_});
    }
  }
  // exponent transport is a closed-form identity
  {
    const WeaklyStableLaw law = WeaklyStableLaw::symmetric_stable(1.3);
    FiniteMeasure nu;
    nu.add_atom(0.5, 0.3);
    nu.add_atom(1.0, 0.4);
    nu.add_atom(2.0, 0.1);
    const WeakLevyTriple triple(law, 0.7, std::move(nu));
    const ControlMeasure control = ControlMeasure::lebesgue(0.8);
    const StepFunction f({0.0, 0.5, 1.25, 2.0}, {1.5, 0.0, 0.6});
    const WeakLevyTriple moved = transported_triple(triple, control, f);
    double worst = 0.0;
    for (double t : num::linear_grid(0.1, 3.0, 30)) {
      worst = std::max(worst, std::abs(weak_integral_cf(triple, control, f, t) -
                                       weak_lk_cf(moved, t)));
    }
    parts.push_back({worst, 1e-10});
  }
  return combine("acc09_weak_integral", parts, n,
                 "refinement invariance, cf formula, exponent transport");
}

VerifyResult acc10_subordination(RngStream base) {
  constexpr std::size_t n = 100000;
  const std::vector<double> grid = num::linear_grid(0.0, 1.0, 5);
  const SubordinationReport r = subordination_check(2.0, 0.5, grid, n, base.child(1));
  std::vector<Part> parts{{r.ks, 0.01}};
  return combine("acc10_subordination", parts, n,
                 "stable-base associated process terminal law vs direct stable");
}

VerifyResult subordination_extra(RngStream base) {
  constexpr std::size_t n = 100000;
  const std::vector<double> grid = num::linear_grid(0.0, 1.0, 5);
  std::vector<Part> parts;
  parts.push_back({subordination_check(1.5, 0.5, grid, n, base.child(1)).ks, 0.015});
  // terminal law against the exact unit-scale 1-stable cdf when alpha beta = 1
  WeakRandomMeasureSpec spec(WeaklyStableLaw::symmetric_stable(2.0), WeakJumpBase::stable(0.5),
                             ControlMeasure::lebesgue(1.0));
  std::vector<double> terminal = par::draw_batch(n, base.child(2), [&](RngStream& rng) {
    return weak_additive_path(spec, grid, rng).Y.back()[0];
  });
  parts.push_back(
      {ks_distance_cdf(terminal, [](double x) { return 0.5 + std::atan(x) / M_PI; }), 0.01});
  return combine("subordination_extra", parts, n, "other index pairs and the exact Cauchy route");
}

VerifyResult weak_integral_structure(RngStream base) {
  constexpr std::size_t n = 100000;
  std::vector<Part> parts;
  const WeaklyStableLaw law = WeaklyStableLaw::symmetric_stable(2.0);
  const WeakRandomMeasureSpec spec(law, WeakJumpBase::compound_poisson(1.0),
                                   ControlMeasure::lebesgue(1.0));
  // zero integrand
  {
    RngStream rng = base.child(1);
    const StepFunction zero({0.0, 2.0}, {0.0});
    parts.push_back({std::abs(weak_integral_sample(spec, zero, rng)), 1e-15});
  }
  // scale equivariance
  {
    const StepFunction f({0.0, 1.0, 2.0}, {1.0, 2.0});
    const StepFunction cf({0.0, 1.0, 2.0}, {3.0, 6.0});
    std::vector<double> scaled = par::draw_batch(n, base.child(2), [&](RngStream& rng) {
      return 3.0 * weak_integral_sample(spec, f, rng);
    });
    std::vector<double> direct = par::draw_batch(n, base.child(3), [&](RngStream& rng) {
      return weak_integral_sample(spec, cf, rng);
    });
    merge_common_atoms(scaled, direct);
    parts.push_back({ks_distance(scaled, direct), 0.015});
  }
  // additivity over disjoint supports
  {
    const StepFunction f({0.0, 1.0}, {2.0});
    const StepFunction g({0.0, 1.0, 2.0}, {0.0, 1.0});
    const StepFunction sum({0.0, 1.0, 2.0}, {2.0, 1.0});
    std::vector<double> folded = par::draw_batch(n, base.child(4), [&](RngStream& rng) {
      const double a = weak_integral_sample(spec, f, rng);
      const double b = weak_integral_sample(spec, g, rng);
      const RepresentablePair pair = representable_pair(law);
      return pair.theta(a, mu_sample(law, rng), b, mu_sample(law, rng));
    });
    std::vector<double> direct = par::draw_batch(n, base.child(5), [&](RngStream& rng) {
      return weak_integral_sample(spec, sum, rng);
    });
    merge_common_atoms(folded, direct);
    parts.push_back({ks_distance(folded, direct), 0.015});
  }
  // lattice law of the unit-weight integral with a compound Poisson base
  {
    const WeaklyStableLaw l1 = WeaklyStableLaw::symmetric_stable(1.0);
    const WeakRandomMeasureSpec s1(l1, WeakJumpBase::compound_poisson(1.5),
                                   ControlMeasure::lebesgue(1.0));
    const StepFunction f({0.0, 2.0}, {1.0});
    std::vector<double> draws = par::draw_batch(n, base.child(6), [&](RngStream& rng) {
      return weak_integral_sample(s1, f, rng);
    });
    const Measure lattice = weak_poisson_dist(l1, 1.5, 2.0, 60);
    std::vector<double> jump_points;
    for (const Atom& a : lattice.components().atoms()) jump_points.push_back(a.point);
    parts.push_back(
        {ks_distance_cdf(draws, [&](double x) { return lattice.cdf(x); }, jump_points), 0.015});
  }
  return combine("weak_integral_structure", parts, n,
                 "zero, scaling, additivity and the lattice pushforward");
}

// -- registry ---------------------------------------------------------------------------

struct Check {
  std::string name;
  std::vector<std::string> suites;
  std::function<VerifyResult(RngStream)> fn;
};

const std::vector<Check>& registry() {
  static const std::vector<Check> checks = {
      {"acc01_kernel_exactness", {"kernels", "acceptance"}, acc01_kernel_exactness},
      {"acc02_assoc_homogeneity", {"kernels", "acceptance"}, acc02_assoc_homogeneity},
      {"kernel_identity_commute", {"kernels"}, kernel_identity_and_commute},
      {"kernel_sampler_vs_measure", {"kernels"}, kernel_sampler_matches_measure},
      {"omega_bounds", {"kernels", "stable"}, omega_bounds},
      {"acc03_stable_gcf_identity", {"stable", "acceptance"}, acc03_stable_gcf_identity},
      {"stable_gcf_kingman", {"stable"}, stable_gcf_kingman},
      {"stable_sampler_ks", {"stable"}, stable_sampler_ks},
      {"stable_sampler_gcf_mc", {"stable"}, stable_sampler_gcf_mc},
      {"gcf_basics", {"stable"}, gcf_basics},
      {"gcf_multiplicative", {"stable"}, gcf_multiplicative},
      {"gcf_weak_convergence", {"stable"}, gcf_weak_convergence},
      {"lk_gcf_checks", {"stable"}, lk_gcf_checks},
      {"acc04_cpoisson_closed_forms", {"cpoisson", "acceptance"}, acc04_cpoisson_closed_forms},
      {"cpoisson_exp_identity", {"cpoisson"}, cpoisson_exp_identity},
      {"cpoisson_semigroup", {"cpoisson"}, cpoisson_semigroup},
      {"cpoisson_truncation", {"cpoisson"}, cpoisson_truncation},
      {"kingman_weak_cf_values", {"cpoisson"}, kingman_weak_cf_values},
      {"acc05_chapman_kolmogorov", {"processes", "acceptance"}, acc05_chapman_kolmogorov},
      {"acc06_integral_process", {"processes", "acceptance"}, acc06_integral_process},
      {"levy_marginals", {"processes"}, levy_marginals},
      {"levy_paths_structure", {"processes"}, levy_paths_structure},
      {"lk_family_terminal_gcf", {"processes"}, lk_family_terminal_gcf},
      {"acc07_representability", {"weak", "acceptance"}, acc07_representability},
      {"acc08_weak_poisson", {"weak", "acceptance"}, acc08_weak_poisson},
      {"weak_chain_laws", {"weak"}, weak_chain_laws},
      {"weak_independence", {"weak"}, weak_independence},
      {"weak_lk_identities", {"weak"}, weak_lk_identities},
      {"mu_sampler_cf", {"weak"}, mu_sampler_cf},
      {"weak_measure_cells", {"weak"}, weak_measure_cells},
      {"weak_poisson_dist_checks", {"weak"}, weak_poisson_dist_checks},
      {"uniform_power_checks", {"weak"}, uniform_power_checks},
      {"acc09_weak_integral", {"integral", "acceptance"}, acc09_weak_integral},
      {"acc10_subordination", {"integral", "acceptance"}, acc10_subordination},
      {"subordination_extra", {"integral"}, subordination_extra},
      {"weak_integral_structure", {"integral"}, weak_integral_structure},
  };
  return checks;
}

}  // namespace

std::vector<std::string> verify_suites() {
  return {"kernels", "stable", "cpoisson", "processes", "weak", "integral", "acceptance", "all"};
}

std::vector<VerifyResult> run_verify(const std::string& suite, std::uint64_t seed, bool parallel) {
  const auto& checks = registry();
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (suite == "all" ||
        std::find(checks[i].suites.begin(), checks[i].suites.end(), suite) !=
            checks[i].suites.end()) {
      selected.push_back(i);
    }
  }
  if (selected.empty()) {
    throw argument_error("unknown verify suite '" + suite + "'");
  }
  std::vector<VerifyResult> results(selected.size());
  const RngStream base(seed, 0x76657269ULL);  // fixed lane for the verify tree
  par::for_each_index(
      selected.size(),
      [&](std::size_t i) {
        const Check& check = checks[selected[i]];
        VerifyResult r;
        try {
          r = check.fn(base.child(selected[i]));
        } catch (const std::exception& e) {
          r.statistic = std::numeric_limits<double>::infinity();
          r.threshold = 1.0;
          r.pass = false;
          r.note = std::string("exception: ") + e.what();
        }
        r.test = check.name;
        r.seed = seed;
        results[i] = std::move(r);
      },
      !parallel);
  std::sort(results.begin(), results.end(),
            [](const VerifyResult& a, const VerifyResult& b) { return a.test < b.test; });
  return results;
}

}  // namespace gconv
