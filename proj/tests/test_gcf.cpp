#include <doctest.h>

#include <cmath>

#include "gconv/errors.hpp"
#include "gconv/gcf.hpp"
#include "gconv/numeric.hpp"
#include "gconv/parallel.hpp"
#include "gconv/stats.hpp"

#include "oracles.hpp"

using namespace gconv;

namespace {

Measure kendall_sigma1_grid() {
  // the alpha = 1 stable density tabulated wide enough for 1e-5 accuracy
  std::vector<double> grid = num::log_grid(1e-4, 1e8, 1 << 15);
  grid = num::merge_grids(grid, {1.0 / 3.0, 0.5, 1.0, 2.0});
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = stable_density(ConvSpec::kendall(1.0), 1.0, grid[i]);
  }
  const double tail = 1.0 - oracles::kendall_stable_cdf(1.0, 1.0, 1e8);
  return Measure::grid_density_normalized(std::move(grid), std::move(vals), tail);
}

}  // namespace

TEST_CASE("gcf of point masses") {
  for (const char* name : {"classic", "kendall:a=1", "kingman:s=0.5", "max"}) {
    const ConvSpec spec = ConvSpec::parse(name);
    for (double t : {0.25, 1.0, 3.0}) {
      CHECK(gcf(spec, Measure::dirac(1.0), t).value == doctest::Approx(omega(spec, t)));
      CHECK(gcf(spec, Measure::dirac(0.0), t).value == doctest::Approx(1.0));
    }
    CHECK(gcf(spec, Measure::dirac_mix({{0.3, 0.5}, {2.0, 0.5}}), 0.0).value == 1.0);
  }
  CHECK_THROWS_AS(gcf(ConvSpec::classic(), Measure::dirac(1.0), -0.1), argument_error);
}

TEST_CASE("gcf by quadrature reproduces the stable transform") {
  const Measure density = kendall_sigma1_grid();
  const ConvSpec spec = ConvSpec::kendall(1.0);
  for (double t : num::linear_grid(0.0, 3.0, 13)) {
    CHECK(std::abs(gcf(spec, density, t).value - std::exp(-t)) < 1e-5);
  }
}

TEST_CASE("gcf Monte Carlo reports a standard error") {
  const RngStream base(3, 0);
  const Measure law = Measure::sampler_backed(
      [](RngStream& rng) { return stable_sample(ConvSpec::kendall(1.0), 1.0, rng); });
  CHECK_THROWS_AS(gcf(ConvSpec::kendall(1.0), law, 1.0), unsupported_error);
  const GcfValue v = gcf_mc(ConvSpec::kendall(1.0), law, 1.0, 200000, base);
  CHECK(v.stderr_ > 0.0);
  CHECK(std::abs(v.value - std::exp(-1.0)) < 3.0 * v.stderr_ + 1e-3);

  const Measure emp = materialize(law, 100000, base.child(1));
  const GcfValue ve = gcf(ConvSpec::kendall(1.0), emp, 1.0);
  CHECK(ve.stderr_ > 0.0);
  CHECK(std::abs(ve.value - std::exp(-1.0)) < 4.0 * ve.stderr_);
}

TEST_CASE("upsilon") {
  CHECK(upsilon(ConvSpec::kendall(1.0), 0.5, 1.0) == doctest::Approx(0.5));
  CHECK(upsilon(ConvSpec::kendall(1.0), 0.0, 1.0) == 0.0);
  // constant beyond the cutoff
  CHECK(upsilon(ConvSpec::classic(), 5.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  // the flat-top kernel admits no valid cutoff
  CHECK_THROWS_AS(upsilon(ConvSpec::max(), 2.0, 1.0), argument_error);
  CHECK_THROWS_AS(upsilon(ConvSpec::kendall(1.0), 0.5, -1.0), argument_error);
}

TEST_CASE("exponent representation evaluator") {
  // pure power part
  const LevyTriple pure(ConvSpec::kendall(0.7), 1.0, FiniteMeasure(), 1.0);
  for (double t : {0.25, 1.0, 2.0}) {
    CHECK(lk_gcf(pure, t) == doctest::Approx(std::exp(-std::pow(t, 0.7))));
  }
  // single atom at the cutoff reduces the integral to Omega(t) - 1
  const ConvSpec spec = ConvSpec::pstable(1.5);
  const double u1 = upsilon(spec, 1.0, 1.0);
  const LevyTriple atom(spec, 0.0, FiniteMeasure::point_mass(1.0, u1), 1.0);
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(lk_gcf(atom, t) == doctest::Approx(std::exp(omega(spec, t) - 1.0)));
  }
  // a density component integrates through the kernel; brute-force oracle
  const ConvSpec kendall = ConvSpec::kendall(1.0);
  std::vector<double> grid = num::linear_grid(0.25, 2.0, 513);
  std::vector<double> vals(grid.size(), 0.4);  // uniform mass 0.7 on [1/4, 2]
  FiniteMeasure m;
  m.add_density(grid, vals);
  const LevyTriple triple(kendall, 0.3, std::move(m), 1.0);
  for (double t : {0.5, 1.5}) {
    const double brute = oracles::midpoint(
        [&](double x) {
          const double ups = x <= 1.0 ? x : 1.0;  // 1 - omega for this kernel
          return (omega(kendall, t * x) - 1.0) / ups * 0.4;
        },
        0.25, 2.0);
    CHECK(lk_gcf(triple, t) ==
          doctest::Approx(std::exp(-0.3 * t + brute)).epsilon(1e-6));
  }
  // validation
  CHECK_THROWS_AS(LevyTriple(kendall, -1.0, FiniteMeasure(), 1.0), argument_error);
  CHECK_THROWS_AS(LevyTriple(kendall, 1.0, FiniteMeasure::point_mass(0.0, 1.0), 1.0),
                  argument_error);
  CHECK_THROWS_AS(LevyTriple(ConvSpec::max(), 1.0, FiniteMeasure(), 1.0), argument_error);
}

TEST_CASE("the kernel-law transform factorizes") {
  // for every catalog member the transform of the point-mass convolution
  // splits into the product of the kernels; exact for atomic laws, within
  // grid tolerance for the mixture-valued ones
  const struct {
    const char* name;
    double tol;
  } cases[] = {{"classic", 1e-12}, {"symmetric:a=0.8", 1e-12}, {"pstable:p=1.5", 1e-12},
               {"max", 1e-12},     {"kendall:a=0.7", 2e-4},    {"kingman:s=0.5", 2e-4},
               {"kingman:s=2.0", 2e-4}};
  for (const auto& c : cases) {
    const ConvSpec spec = ConvSpec::parse(c.name);
    for (auto [x, y] : {std::pair{0.5, 2.0}, std::pair{1.0, 1.0}, std::pair{3.0, 0.2}}) {
      const Measure law = kernel_measure(spec, x, y);
      for (double t : {0.2, 0.45, 0.9}) {
        CHECK(std::abs(gcf(spec, law, t).value - omega(spec, t * x) * omega(spec, t * y)) <
              c.tol);
      }
    }
  }
}

TEST_CASE("gcf is multiplicative over convolve, exact mixtures") {
  const RngStream base(5, 0);
  const Measure l1 = Measure::dirac_mix({{0.5, 0.3}, {1.0, 0.7}});
  const Measure l2 = Measure::dirac_mix({{0.8, 0.4}, {2.0, 0.6}});
  for (const char* name : {"kendall:a=0.7", "kingman:s=1", "classic"}) {
    const ConvSpec spec = ConvSpec::parse(name);
    const Measure folded = convolve(spec, l1, l2, 0, base);
    for (double t : {0.25, 0.5, 1.0, 2.0}) {
      CHECK(gcf(spec, folded, t).value ==
            doctest::Approx(gcf(spec, l1, t).value * gcf(spec, l2, t).value).epsilon(2e-4));
    }
  }
}
