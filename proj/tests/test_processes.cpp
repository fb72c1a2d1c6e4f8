#include <doctest.h>

#include <cmath>

#include "gconv/errors.hpp"
#include "gconv/numeric.hpp"
#include "gconv/parallel.hpp"
#include "gconv/process.hpp"
#include "gconv/stats.hpp"

#include "oracles.hpp"

using namespace gconv;

TEST_CASE("step function parsing and evaluation") {
  const StepFunction f = StepFunction::parse("1@[0,1);2@[1,2)");
  CHECK(f(0.5) == 1.0);
  CHECK(f(1.0) == 2.0);
  CHECK(f(1.999) == 2.0);
  CHECK(f(2.0) == 0.0);
  CHECK(f(-0.1) == 0.0);
  CHECK(f.integrate_of_value(0.0, 2.0, [](double a) { return a * a; }) == doctest::Approx(5.0));
  CHECK(f.integrate_of_value(0.5, 3.0, [](double a) { return a; }) == doctest::Approx(2.5));
  CHECK(f.refined_by({0.0, 0.5, 1.0, 1.5, 2.0}));
  CHECK_FALSE(f.refined_by({0.0, 0.7, 2.0}));
  CHECK(f.same_function(StepFunction::parse("1@[0,0.5);1@[0.5,1);2@[1,2)")));
  CHECK_FALSE(f.same_function(StepFunction::parse("1@[0,1);3@[1,2)")));
  CHECK_THROWS_AS(StepFunction::parse("1@[0,1);2@[1.5,2)"), argument_error);
  CHECK_THROWS_AS(StepFunction::parse("nonsense"), argument_error);
  CHECK_THROWS_AS(StepFunction({0.5, 1.0}, {1.0}), argument_error);  // domain must start at 0
}

TEST_CASE("transition sampling") {
  RngStream rng(81, 0);
  // unit element: the state never moves
  for (int i = 0; i < 20; ++i) {
    CHECK(transition_sample(ConvSpec::kendall(0.7), 1.5, Measure::dirac(0.0), rng) == 1.5);
  }
  CHECK(transition_sample(ConvSpec::classic(), 2.0, Measure::dirac(1.0), rng) == 3.0);
  CHECK_THROWS_AS(transition_sample(ConvSpec::classic(), -1.0, Measure::dirac(1.0), rng),
                  argument_error);
  // kendall transition from 1 with a unit jump has the kernel law
  const RngStream base(81, 5);
  auto draws = par::draw_batch(50000, base, [](RngStream& r) {
    return transition_sample(ConvSpec::kendall(1.0), 1.0, Measure::dirac(1.0), r);
  });
  const Measure law = kernel_measure(ConvSpec::kendall(1.0), 1.0, 1.0);
  CHECK(ks_distance_cdf(draws, [&](double v) { return law.cdf(v); }) < 0.012);
}

TEST_CASE("chain marginals of the stable families") {
  const RngStream base(83, 0);
  const std::vector<double> grid{0.0, 0.5, 1.0, 1.5, 2.0};
  // max algebra: terminal CDF e^{-t x^{-p}} at t=2
  {
    const ConvSpec spec = ConvSpec::max();
    const IncrementFamily fam = stable_increment_family(spec, 1.5);
    auto terminal = par::draw_batch(50000, base.child(1), [&](RngStream& rng) {
      return simulate_levy(spec, fam, grid, rng).states.back();
    });
    CHECK(ks_distance_cdf(terminal, [](double x) {
            return x > 0.0 ? std::exp(-2.0 * std::pow(x, -1.5)) : 0.0;
          }) < 0.012);
  }
  // kendall algebra: terminal is the t^{1/alpha}-scaled stable law
  {
    const ConvSpec spec = ConvSpec::kendall(1.0);
    const IncrementFamily fam = stable_increment_family(spec, 1.0);
    auto terminal = par::draw_batch(50000, base.child(2), [&](RngStream& rng) {
      return simulate_levy(spec, fam, grid, rng).states.back();
    });
    CHECK(ks_distance_cdf(terminal, [](double x) {
            return oracles::kendall_stable_cdf(1.0, 1.0, x / 2.0);
          }) < 0.012);
  }
  // classic with unit jumps: counting process marginal
  {
    const ConvSpec spec = ConvSpec::classic();
    const IncrementFamily fam = cpoisson_increment_family(spec, 1.0, Measure::dirac(1.0));
    auto terminal = par::draw_batch(50000, base.child(3), [&](RngStream& rng) {
      return simulate_levy(spec, fam, grid, rng).states.back();
    });
    auto cdf = [](double x) {
      double acc = 0.0;
      for (int k = 0; k <= static_cast<int>(std::floor(x)); ++k) {
        acc += oracles::poisson_pmf(2.0, k);
      }
      return x < 0.0 ? 0.0 : acc;
    };
    CHECK(ks_distance_cdf(terminal, cdf, {0.0, 1.0, 2.0, 3.0}) < 0.012);
  }
}

TEST_CASE("paths are monotone for the pure-growth algebras") {
  const RngStream base(87, 0);
  const std::vector<double> grid = num::linear_grid(0.0, 2.0, 17);
  for (int p = 0; p < 300; ++p) {
    RngStream rng = base.child(p);
    const PathRecord path = simulate_levy(ConvSpec::max(),
                                          stable_increment_family(ConvSpec::max(), 1.0), grid,
                                          rng);
    for (std::size_t i = 1; i < path.states.size(); ++i) {
      CHECK(path.states[i] >= path.states[i - 1]);
    }
  }
}

TEST_CASE("two-route transition check") {
  const RngStream base(89, 0);
  // a constant-zero increment family: both routes give the unit mass at x
  IncrementFamily still;
  still.name = "still";
  still.sample = [](double, RngStream&) { return 0.0; };
  const CkReport r = ck_check(ConvSpec::kendall(1.0), still, 0.0, 1.0, 2.0, 1.0,
                              {0.5, 1.0, 1.5}, 2000, base);
  CHECK(r.pass);
  CHECK(r.max_abs_diff == 0.0);
  // kendall stable family passes at three-sigma
  const IncrementFamily fam = stable_increment_family(ConvSpec::kendall(1.0), 1.0);
  const CkReport r2 = ck_check(ConvSpec::kendall(1.0), fam, 0.0, 1.0, 2.0, 1.0,
                               {0.5, 1.0, 2.0, 4.0, 8.0}, 100000, base.child(1));
  CHECK(r2.pass);
  CHECK_THROWS_AS(ck_check(ConvSpec::kendall(1.0), fam, 1.0, 1.0, 2.0, 0.0, {1.0}, 100, base),
                  argument_error);
}

TEST_CASE("weighted-integral transform closed forms") {
  const ConvSpec spec = ConvSpec::kendall(1.0);
  const LevyTriple triple(spec, 1.0, FiniteMeasure(), 1.0);
  // constant weight reduces to the power of the base transform
  const StepFunction one({0.0, 3.0}, {1.0});
  for (double u : {0.5, 1.0, 2.0}) {
    CHECK(integral_process_gcf(triple, one, 0.5, 2.5, u) ==
          doctest::Approx(std::exp(-u * 2.0)));
  }
  // zero weight is the unit transform
  const StepFunction zero({0.0, 2.0}, {0.0});
  CHECK(integral_process_gcf(triple, zero, 0.0, 2.0, 1.7) == doctest::Approx(1.0));
  // the two-step closed form
  const StepFunction two({0.0, 1.0, 2.0}, {1.0, 2.0});
  CHECK(integral_process_gcf(triple, two, 0.0, 2.0, 1.0) ==
        doctest::Approx(std::exp(-(1.0 + 2.0))));
  const LevyTriple t07(ConvSpec::kendall(0.7), 1.0, FiniteMeasure(), 1.0);
  CHECK(integral_process_gcf(t07, two, 0.0, 2.0, 1.0) ==
        doctest::Approx(std::exp(-(1.0 + std::pow(2.0, 0.7)))));
}

TEST_CASE("weighted-integral path simulation") {
  const RngStream base(91, 0);
  const ConvSpec spec = ConvSpec::kendall(1.0);
  const LevyTriple triple(spec, 1.0, FiniteMeasure(), 1.0);
  const StepFunction f({0.0, 1.0, 2.0}, {1.0, 2.0});
  const std::vector<double> grid{0.0, 0.5, 1.0, 1.5, 2.0};
  CHECK_THROWS_AS(
      [&] {
        RngStream rng(91, 1);
        simulate_integral_process(triple, f, {0.0, 0.7, 2.0}, rng);
      }(),
      argument_error);
  // unit weight is indistinguishable from the plain chain
  const StepFunction unit({0.0, 2.0}, {1.0});
  auto weighted = par::draw_batch(50000, base.child(1), [&](RngStream& rng) {
    return simulate_integral_process(triple, unit, grid, rng).states.back();
  });
  const IncrementFamily fam = stable_increment_family(spec, 1.0);
  auto plain = par::draw_batch(50000, base.child(2), [&](RngStream& rng) {
    return simulate_levy(spec, fam, grid, rng).states.back();
  });
  CHECK(ks_distance(weighted, plain) < 0.015);
  // constant weight c acts as the scale T_c
  const StepFunction half({0.0, 2.0}, {0.5});
  auto scaled = par::draw_batch(50000, base.child(3), [&](RngStream& rng) {
    return 2.0 * simulate_integral_process(triple, half, grid, rng).states.back();
  });
  CHECK(ks_distance(scaled, plain) < 0.015);
  // empirical transform of the two-step path against the closed form
  auto terminal = par::draw_batch(50000, base.child(4), [&](RngStream& rng) {
    return simulate_integral_process(triple, f, grid, rng).states.back();
  });
  for (double u : {0.5, 1.0, 2.0}) {
    std::vector<double> vals(terminal.size());
    for (std::size_t i = 0; i < terminal.size(); ++i) vals[i] = omega(spec, u * terminal[i]);
    const MeanStderr got = mean_stderr(vals);
    CHECK(std::abs(got.mean - integral_process_gcf(triple, f, 0.0, 2.0, u)) <
          3.5 * got.stderr_);
  }
}

TEST_CASE("exponent-representation increments and truncation report") {
  const ConvSpec spec = ConvSpec::kendall(1.0);
  FiniteMeasure m;
  std::vector<double> grid = num::linear_grid(0.01, 2.0, 512);
  std::vector<double> vals(grid.size(), 0.3);
  m.add_density(grid, vals);
  const LevyTriple triple(spec, 0.5, std::move(m), 1.0);
  LkTruncation report;
  const IncrementFamily fam = lk_increment_family(triple, 1e-3, &report);
  CHECK(report.cut > 0.01);
  CHECK(report.dropped_mass == doctest::Approx(1e-3 * triple.m().total_mass()).epsilon(0.05));
  CHECK(report.jump_intensity > 0.0);
  CHECK(report.log_phi_error < 0.05);
  // terminal transform against the exponent representation at time 1
  const RngStream base(93, 0);
  auto terminal = par::draw_batch(100000, base, [&](RngStream& rng) {
    return simulate_levy(spec, fam, {0.0, 0.5, 1.0}, rng).states.back();
  });
  for (double u : {0.5, 1.0}) {
    std::vector<double> w(terminal.size());
    for (std::size_t i = 0; i < terminal.size(); ++i) w[i] = omega(spec, u * terminal[i]);
    const MeanStderr got = mean_stderr(w);
    CHECK(std::abs(got.mean - lk_gcf(triple, u)) < 3.0 * got.stderr_ + report.log_phi_error);
  }
}

TEST_CASE("hill diagnostic on heavy-tailed terminals") {
  const RngStream base(97, 0);
  const ConvSpec spec = ConvSpec::kendall(1.0);
  const IncrementFamily fam = stable_increment_family(spec, 1.0);
  auto terminal = par::draw_batch(100000, base, [&](RngStream& rng) {
    return simulate_levy(spec, fam, {0.0, 1.0}, rng).states.back();
  });
  // at p = alpha the x^{-p-1} front term cancels and the tail index is 2 alpha
  CHECK(hill_tail_index(terminal, 1000) == doctest::Approx(2.0).epsilon(0.15));
}
