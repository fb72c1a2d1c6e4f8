#include <doctest.h>

#include <cmath>

#include "gconv/errors.hpp"
#include "gconv/gcf.hpp"
#include "gconv/infdiv.hpp"
#include "gconv/numeric.hpp"
#include "gconv/parallel.hpp"
#include "gconv/stats.hpp"

#include "oracles.hpp"

using namespace gconv;

TEST_CASE("compound poisson sampling basics") {
  const RngStream base(41, 0);
  // vanishing intensity: everything collapses to zero
  const CompoundPoissonSpec tiny(ConvSpec::kendall(1.0), 1e-9, Measure::dirac(1.0));
  auto zeros = par::draw_batch(10000, base.child(1),
                               [&](RngStream& rng) { return cpoisson_sample(tiny, rng); });
  for (double v : zeros) CHECK(v == 0.0);

  // the p-stable algebra keeps the draws on the lattice k^{1/p}
  const double p = 1.5;
  const CompoundPoissonSpec lattice(ConvSpec::pstable(p), 2.0, Measure::dirac(1.0));
  auto draws = par::draw_batch(20000, base.child(2),
                               [&](RngStream& rng) { return cpoisson_sample(lattice, rng); });
  for (double v : draws) {
    const double k = std::round(std::pow(v, p));
    CHECK(std::abs(v - std::pow(k, 1.0 / p)) < 1e-9);
  }
  // and the frequencies are Poisson
  double at0 = 0.0;
  for (double v : draws) at0 += v == 0.0 ? 1.0 : 0.0;
  CHECK(at0 / 20000.0 == doctest::Approx(std::exp(-2.0)).epsilon(0.05));

  CHECK_THROWS_AS(CompoundPoissonSpec(ConvSpec::classic(), 0.0, Measure::dirac(1.0)),
                  argument_error);
  CHECK_THROWS_AS(CompoundPoissonSpec(ConvSpec::classic(), 1.0, Measure::empirical({-2.0})),
                  argument_error);
}

TEST_CASE("kendall exponential closed form") {
  const RngStream base(43, 0);
  const CompoundPoissonSpec cp(ConvSpec::kendall(1.0), 2.0, Measure::dirac(1.0));
  auto draws = par::draw_batch(100000, base.child(1),
                               [&](RngStream& rng) { return cpoisson_sample(cp, rng); });
  CHECK(ks_distance_cdf(draws, [](double u) { return oracles::kendall_cpoisson_cdf(2.0, u); },
                        {0.0, 1.0}) < 0.01);

  // the truncated series against the same display, pointwise
  const CpoissonMeasure series = cpoisson_measure(cp, cpoisson_kmax(2.0));
  CHECK(series.truncation_mass < 1e-12);
  for (double u : {0.5, 1.0, 1.5, 3.0, 10.0}) {
    CHECK(series.measure.cdf(u) ==
          doctest::Approx(oracles::kendall_cpoisson_cdf(2.0, u)).epsilon(1e-4));
  }
  // atoms: e^-a at 0 and a e^-a at the jump site
  REQUIRE(series.measure.components().atoms().size() == 2);
  CHECK(series.measure.components().atoms()[0].weight == doctest::Approx(std::exp(-2.0)));
  CHECK(series.measure.components().atoms()[1].weight == doctest::Approx(2.0 * std::exp(-2.0)));
}

TEST_CASE("max exponential collapses geometrically") {
  const CpoissonMeasure m = cpoisson_measure(
      CompoundPoissonSpec(ConvSpec::max(), 1.3, Measure::dirac(1.0)), cpoisson_kmax(1.3));
  const auto& atoms = m.measure.components().atoms();
  REQUIRE(atoms.size() == 2);
  CHECK(atoms[0].point == 0.0);
  CHECK(atoms[0].weight == doctest::Approx(std::exp(-1.3)));
  CHECK(atoms[1].point == 1.0);
  CHECK(atoms[1].weight == doctest::Approx(1.0 - std::exp(-1.3)));
}

TEST_CASE("atomic series for the additive and p-stable algebras") {
  // classic with a two-atom jump: plain compound Poisson on a grid of sums
  const Measure jump = Measure::dirac_mix({{1.0, 0.5}, {2.0, 0.5}});
  const CpoissonMeasure m = cpoisson_measure(
      CompoundPoissonSpec(ConvSpec::classic(), 1.0, jump), cpoisson_kmax(1.0));
  // P(X = 0) = e^-1; P(X = 1) = e^-1 * 1/2
  double at0 = 0.0, at1 = 0.0;
  for (const Atom& a : m.measure.components().atoms()) {
    if (a.point == 0.0) at0 = a.weight;
    if (a.point == 1.0) at1 = a.weight;
  }
  CHECK(at0 == doctest::Approx(std::exp(-1.0)));
  CHECK(at1 == doctest::Approx(0.5 * std::exp(-1.0)));

  CHECK_THROWS_AS(cpoisson_measure(CompoundPoissonSpec(ConvSpec::kendall(1.0), 1.0, jump), 40),
                  unsupported_error);
  CHECK_THROWS_AS(cpoisson_measure(CompoundPoissonSpec(ConvSpec::kingman(0.5), 1.0,
                                                       Measure::dirac(1.0)),
                                   40),
                  unsupported_error);
}

TEST_CASE("series truncation bound") {
  for (double a : {0.2, 3.0, 25.0}) {
    const CpoissonMeasure m = cpoisson_measure(
        CompoundPoissonSpec(ConvSpec::pstable(1.0), a, Measure::dirac(1.0)), cpoisson_kmax(a));
    CHECK(m.truncation_mass < 1e-12);
  }
}

TEST_CASE("transform of the exponential: exp(a(Phi - 1))") {
  // exact route via the truncated series (no Monte Carlo)
  const ConvSpec spec = ConvSpec::kendall(1.0);
  const double a = 1.5;
  const CpoissonMeasure series = cpoisson_measure(
      CompoundPoissonSpec(spec, a, Measure::dirac(1.0)), cpoisson_kmax(a));
  for (double t : {0.25, 0.5, 1.0, 2.0}) {
    const double want = std::exp(a * (omega(spec, t) - 1.0));
    CHECK(gcf(spec, series.measure, t).value == doctest::Approx(want).epsilon(1e-4));
  }
}

TEST_CASE("convolution power transform") {
  const Measure unit = Measure::dirac(1.0);
  const ConvSpec spec = ConvSpec::kendall(0.7);
  CHECK(conv_power_gcf(spec, unit, 0.0, 1.7) == 1.0);
  CHECK(conv_power_gcf(spec, unit, 1.0, 0.5) == doctest::Approx(omega(spec, 0.5)));
  CHECK(conv_power_gcf(spec, unit, 2.5, 0.5) ==
        doctest::Approx(std::pow(omega(spec, 0.5), 2.5)));
  // nonpositive base is a domain failure: the kendall kernel hits zero at t=1
  CHECK_THROWS_AS(conv_power_gcf(spec, unit, 2.0, 1.0), numeric_error);
  CHECK_THROWS_AS(conv_power_gcf(spec, unit, -1.0, 0.5), argument_error);
}

TEST_CASE("two-point-jump exponential cf in the spherical algebra") {
  CHECK(kingman_weak_poisson_cf(1.0, 1e-12) == doctest::Approx(1.0));
  CHECK(kingman_weak_poisson_cf(1.0, M_PI) == doctest::Approx(0.0).epsilon(1e-12));
  // series branch and direct branch agree across the switch
  CHECK(kingman_weak_poisson_cf(2.0, 0.00999) ==
        doctest::Approx(kingman_weak_poisson_cf(2.0, 0.01001)).epsilon(1e-6));
  // direct substitution at c=1, t=1: e^{-(1-sin 1)}(1 - sin 1 + cos 1)
  const double want = std::exp(-(1.0 - std::sin(1.0))) * (1.0 - std::sin(1.0) + std::cos(1.0));
  CHECK(kingman_weak_poisson_cf(1.0, 1.0) == doctest::Approx(want));
  CHECK_THROWS_AS(kingman_weak_poisson_cf(0.0, 1.0), argument_error);
}

TEST_CASE("semigroup split of the exponential (single algebra, modest n)") {
  const RngStream base(47, 0);
  const ConvSpec spec = ConvSpec::max();
  const Measure jump = Measure::dirac(1.0);
  auto whole = par::draw_batch(50000, base.child(1), [&](RngStream& rng) {
    return cpoisson_sample(CompoundPoissonSpec(spec, 2.0, jump), rng);
  });
  auto split = par::draw_batch(50000, base.child(2), [&](RngStream& rng) {
    double state = 0.0;
    for (int k = 0; k < 4; ++k) {
      state = kernel_sample(spec, state,
                            cpoisson_sample(CompoundPoissonSpec(spec, 0.5, jump), rng), rng);
    }
    return state;
  });
  CHECK(ks_distance(whole, split) < 0.015);
}
