#include <doctest.h>

#include <cmath>
#include <limits>

#include "gconv/convolution.hpp"
#include "gconv/errors.hpp"
#include "gconv/numeric.hpp"
#include "gconv/parallel.hpp"
#include "gconv/stats.hpp"

#include "oracles.hpp"

using namespace gconv;

TEST_CASE("conv spec parsing") {
  CHECK(ConvSpec::parse("kendall:a=0.7").alpha() == doctest::Approx(0.7));
  CHECK(ConvSpec::parse("pstable:p=1.5").p() == doctest::Approx(1.5));
  CHECK(ConvSpec::parse("kingman:s=0.5").s() == doctest::Approx(0.5));
  CHECK(ConvSpec::parse("max").kind() == ConvKind::Max);
  CHECK(ConvSpec::parse("classic").kind() == ConvKind::Classic);
  CHECK(ConvSpec::parse("symmetric:a=1").kind() == ConvKind::SymmetricAlpha);
  CHECK(ConvSpec::parse("kendall:a=2").to_string() == "kendall:a=2");
  CHECK_THROWS_AS(ConvSpec::parse("kendall:a=0"), argument_error);
  CHECK_THROWS_AS(ConvSpec::parse("kendall"), argument_error);
  CHECK_THROWS_AS(ConvSpec::parse("pstable:q=1"), argument_error);
  CHECK_THROWS_AS(ConvSpec::parse("frobnicate"), argument_error);
  CHECK_THROWS_AS(ConvSpec::kingman(-0.6), argument_error);
}

TEST_CASE("kernel measures, exact atoms") {
  const Measure p2 = kernel_measure(ConvSpec::pstable(2.0), 3.0, 4.0);
  REQUIRE(p2.kind() == MeasureKind::DiracMix);
  CHECK(p2.components().atoms()[0].point == 5.0);
  CHECK(p2.components().atoms()[0].weight == 1.0);

  const Measure s1 = kernel_measure(ConvSpec::symmetric_alpha(1.0), 1.0, 1.0);
  REQUIRE(s1.components().atoms().size() == 2);
  CHECK(s1.components().atoms()[0].point == 0.0);
  CHECK(s1.components().atoms()[0].weight == doctest::Approx(0.5));
  CHECK(s1.components().atoms()[1].point == 2.0);

  // unit element of the algebra
  const Measure k0 = kernel_measure(ConvSpec::kendall(0.4), 0.0, 1.0);
  REQUIRE(k0.kind() == MeasureKind::DiracMix);
  CHECK(k0.components().atoms()[0].point == 1.0);

  // two-point mixing law at the boundary order
  const Measure king = kernel_measure(ConvSpec::kingman(-0.5), 1.5, 2.5);
  REQUIRE(king.components().atoms().size() == 2);
  CHECK(king.components().atoms()[0].point == doctest::Approx(1.0));
  CHECK(king.components().atoms()[1].point == doctest::Approx(4.0));

  CHECK_THROWS_AS(kernel_measure(ConvSpec::max(), -1.0, 2.0), argument_error);
}

TEST_CASE("kendall kernel law: atom plus scaled pareto") {
  const Measure m = kernel_measure(ConvSpec::kendall(1.0), 0.5, 2.0);
  REQUIRE(m.kind() == MeasureKind::Mixture);
  const double r = 0.25;  // (x/y)^alpha
  REQUIRE(m.components().atoms().size() == 1);
  CHECK(m.components().atoms()[0].point == 2.0);
  CHECK(m.components().atoms()[0].weight == doctest::Approx(1.0 - r));
  // the density part carries mass r on [2, inf), pareto 2/u^3 scaled by 2
  CHECK(m.cdf(1.99) == doctest::Approx(0.0));
  const double beyond4 = 1.0 - m.cdf(4.0);  // r * (2/4)^2
  CHECK(beyond4 == doctest::Approx(r * 0.25).epsilon(1e-4));

  // x = y puts the whole mass on the pareto part
  const Measure eq = kernel_measure(ConvSpec::kendall(1.0), 1.0, 1.0);
  CHECK(eq.kind() == MeasureKind::GridDensity);
  CHECK(1.0 - eq.cdf(2.0) == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("kernel samplers match kernel measures") {
  const RngStream base(21, 0);
  const struct {
    ConvSpec spec;
    double x, y;
  } cases[] = {{ConvSpec::kendall(1.0), 1.0, 1.0},
               {ConvSpec::kingman(0.5), 1.0, 2.0},
               {ConvSpec::symmetric_alpha(0.7), 1.0, 2.0}};
  std::size_t idx = 0;
  for (const auto& c : cases) {
    const Measure law = kernel_measure(c.spec, c.x, c.y);
    auto draws = par::draw_batch(50000, base.child(idx++), [&](RngStream& rng) {
      return kernel_sample(c.spec, c.x, c.y, rng);
    });
    std::vector<double> jumps;
    for (const Atom& a : law.components().atoms()) jumps.push_back(a.point);
    CHECK(ks_distance_cdf(draws, [&](double v) { return law.cdf(v); }, jumps) < 0.012);
  }
  // deterministic kernels
  RngStream rng(3, 3);
  CHECK(kernel_sample(ConvSpec::max(), 2.0, 3.0, rng) == 3.0);
  CHECK(kernel_sample(ConvSpec::classic(), 1.5, 2.5, rng) == 4.0);
}

TEST_CASE("kernel laws are proper across scales") {
  RngStream rng(29, 0);
  for (const char* name :
       {"classic", "symmetric:a=0.6", "pstable:p=2", "kendall:a=0.9", "kingman:s=0.2", "max"}) {
    const ConvSpec spec = ConvSpec::parse(name);
    for (int rep = 0; rep < 12; ++rep) {
      const double x = std::pow(10.0, 6.0 * rng.uniform() - 3.0);
      const double y = std::pow(10.0, 6.0 * rng.uniform() - 3.0);
      const Measure m = kernel_measure(spec, x, y);
      CHECK(m.components().total_mass() == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(m.nonnegative_support());
      // cdf is monotone over the support range
      double prev = -1.0;
      for (double q = 0.0; q <= 2.0 * (x + y); q += 0.1 * (x + y) + 1e-12) {
        const double f = m.cdf(q);
        CHECK(f >= prev - 1e-12);
        CHECK(f <= 1.0 + 1e-12);
        prev = f;
      }
      CHECK(m.cdf(1e12 * (x + y + 1.0)) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("omega values") {
  CHECK(omega(ConvSpec::kendall(1.0), 0.5) == doctest::Approx(0.5));
  CHECK(omega(ConvSpec::kendall(0.7), 2.0) == 0.0);
  CHECK(omega(ConvSpec::max(), 2.0) == 0.0);
  CHECK(omega(ConvSpec::max(), 1.0) == 1.0);
  CHECK(omega(ConvSpec::classic(), 1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(omega(ConvSpec::pstable(1.5), 2.0) == doctest::Approx(std::exp(-std::pow(2.0, 1.5))));
  for (const char* name : {"classic", "symmetric:a=0.8", "pstable:p=1.5", "kendall:a=0.7",
                           "kingman:s=0.5", "max"}) {
    CHECK(omega(ConvSpec::parse(name), 0.0) == doctest::Approx(1.0));
  }
  // spherical kernel at integer order three is sin(t)/t
  for (double t : {0.3, 1.0, 7.0, 31.0, 250.0}) {
    CHECK(omega(ConvSpec::kingman(0.5), t) == doctest::Approx(std::sin(t) / t).epsilon(1e-9));
  }
  // and at the boundary order it is the plain cosine
  CHECK(omega(ConvSpec::kingman(-0.5), 2.0) == doctest::Approx(std::cos(2.0)));
  // brute-force cosine transform of the mixing density, s = 1.25
  const double s = 1.25;
  const double c = std::exp(std::lgamma(s + 1.0) - 0.5 * std::log(M_PI) - std::lgamma(s + 0.5));
  const double brute = oracles::midpoint(
      [&](double u) { return c * std::pow(1.0 - u * u, s - 0.5) * std::cos(3.0 * u); }, -1.0,
      1.0, 400000);
  CHECK(omega(ConvSpec::kingman(s), 3.0) == doctest::Approx(brute).epsilon(1e-6));
  CHECK_THROWS_AS(omega(ConvSpec::max(), -0.5), argument_error);
}

TEST_CASE("kappa") {
  CHECK(kappa(ConvSpec::classic()) == 1.0);
  CHECK(kappa(ConvSpec::pstable(1.5)) == 1.5);
  CHECK(kappa(ConvSpec::kendall(0.7)) == doctest::Approx(0.7));
  CHECK(kappa(ConvSpec::kingman(1.0)) == 2.0);
  CHECK(std::isinf(kappa(ConvSpec::max())));
  CHECK(kappa(ConvSpec::symmetric_alpha(0.75)) == doctest::Approx(1.5));
}

TEST_CASE("stable densities: closed forms") {
  // max algebra at p=1, x=1: e^{-1}
  CHECK(stable_density(ConvSpec::max(), 1.0, 1.0) == doctest::Approx(std::exp(-1.0)));
  // kendall at p = alpha collapses to the single-term form
  const double x = 1.7, alpha = 0.8;
  CHECK(stable_density(ConvSpec::kendall(alpha), alpha, x) ==
        doctest::Approx(alpha * std::pow(x, -2.0 * alpha - 1.0) *
                        std::exp(-std::pow(x, -alpha))));
  // spherical p=2 form
  const double s = 0.5;
  CHECK(stable_density(ConvSpec::kingman(s), 2.0, 3.0) ==
        doctest::Approx(std::pow(3.0, s) * std::exp(-1.5) /
                        (std::pow(2.0, s + 1.0) * std::tgamma(s + 1.0))));
  // densities integrate to one
  for (auto [spec, p] : {std::pair{ConvSpec::kendall(1.0), 0.5},
                         std::pair{ConvSpec::max(), 2.0},
                         std::pair{ConvSpec::kingman(0.5), 1.0}}) {
    const double mass =
        num::integrate_de([&, s_ = spec, p_ = p](double v) { return stable_density(s_, p_, v); },
                          0.0, 1e7);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
  }
  CHECK_THROWS_AS(stable_density(ConvSpec::kendall(0.5), 0.7, 1.0), argument_error);  // p > kappa
  CHECK_THROWS_AS(stable_density(ConvSpec::classic(), 0.5, 1.0), unsupported_error);
  CHECK_THROWS_AS(stable_density(ConvSpec::kingman(0.5), 1.5, 1.0), unsupported_error);
}

TEST_CASE("stable identity by brute-force quadrature") {
  // the transform of the closed-form density is exp(-t^p); midpoint oracle
  const ConvSpec kendall = ConvSpec::kendall(1.0);
  for (double t : {0.5, 1.0}) {
    for (double p : {0.5, 1.0}) {
      const double got = oracles::midpoint(
          [&](double v) { return omega(kendall, t * v) * stable_density(kendall, p, v); }, 0.0,
          1.0 / t, 400000);
      CHECK(got == doctest::Approx(std::exp(-std::pow(t, p))).epsilon(1e-6));
    }
  }
}

TEST_CASE("stable samplers: oracle CDFs") {
  const RngStream base(31, 0);
  // max: Frechet inverse-CDF law
  auto mx = par::draw_batch(100000, base.child(1), [](RngStream& rng) {
    return stable_sample(ConvSpec::max(), 1.0, rng);
  });
  CHECK(ks_distance_cdf(mx, [](double x) { return oracles::frechet_cdf(1.0, x); }) < 0.01);
  // kendall p = alpha = 1
  auto kd = par::draw_batch(100000, base.child(2), [](RngStream& rng) {
    return stable_sample(ConvSpec::kendall(1.0), 1.0, rng);
  });
  CHECK(ks_distance_cdf(kd, [](double x) { return oracles::kendall_stable_cdf(1.0, 1.0, x); }) <
        0.01);
  // kendall p = 0.5: transform matches exp(-t^0.5) by Monte Carlo
  auto kd5 = par::draw_batch(1000000, base.child(3), [](RngStream& rng) {
    return stable_sample(ConvSpec::kendall(1.0), 0.5, rng);
  });
  for (double t : {0.5, 1.0, 2.0}) {
    std::vector<double> vals(kd5.size());
    for (std::size_t i = 0; i < kd5.size(); ++i) {
      vals[i] = omega(ConvSpec::kendall(1.0), t * kd5[i]);
    }
    CHECK(std::abs(mean_stderr(vals).mean - std::exp(-std::sqrt(t))) < 0.01);
  }
  RngStream rng(1, 1);
  CHECK_THROWS_AS(stable_sample(ConvSpec::kendall(0.5), 0.9, rng), argument_error);
  // the max algebra admits every exponent, including the degenerate top one
  CHECK(stable_sample(ConvSpec::max(), std::numeric_limits<double>::infinity(), rng) == 1.0);
}

TEST_CASE("one-sided stable variates have the right Laplace transform") {
  const RngStream base(17, 0);
  // beta = 1/2 closed form: S = 1/(2 Z^2)
  auto s_half = par::draw_batch(200000, base.child(1), [](RngStream& rng) {
    return one_sided_stable(0.5, rng);
  });
  auto levy = par::draw_batch(200000, base.child(2), [](RngStream& rng) {
    const double z = rng.normal();
    return 1.0 / (2.0 * z * z);
  });
  CHECK(ks_distance(s_half, levy) < 0.01);
  for (double beta : {0.3, 0.7}) {
    auto draws = par::draw_batch(400000, base.child(10 + static_cast<std::uint64_t>(10 * beta)),
                                 [&](RngStream& rng) { return one_sided_stable(beta, rng); });
    for (double t : {0.5, 1.0, 2.0}) {
      std::vector<double> vals(draws.size());
      for (std::size_t i = 0; i < draws.size(); ++i) vals[i] = std::exp(-t * draws[i]);
      CHECK(std::abs(mean_stderr(vals).mean - std::exp(-std::pow(t, beta))) < 0.005);
    }
  }
  RngStream rng(1, 1);
  CHECK_THROWS_AS(one_sided_stable(1.0, rng), argument_error);
}

TEST_CASE("symmetric stable variates have the right cf") {
  const RngStream base(19, 0);
  for (double p : {0.8, 1.0, 1.6, 2.0}) {
    auto draws = par::draw_batch(400000, base.child(static_cast<std::uint64_t>(10 * p)),
                                 [&](RngStream& rng) { return symmetric_stable(p, rng); });
    for (double t : {0.5, 1.0}) {
      CHECK(std::abs(empirical_cos_cf(draws, t).mean - std::exp(-std::pow(t, p))) < 0.005);
    }
  }
}

TEST_CASE("convolve") {
  const RngStream base(23, 0);
  // unit masses under the additive kernel
  const Measure c = convolve(ConvSpec::classic(), Measure::dirac(1.0), Measure::dirac(1.0), 10,
                             base);
  CHECK(c.components().atoms()[0].point == 2.0);
  // max against a dominating unit
  const Measure mx = convolve(ConvSpec::max(), Measure::dirac_mix({{0.0, 0.5}, {1.0, 0.5}}),
                              Measure::dirac(1.0), 10, base);
  REQUIRE(mx.components().atoms().size() == 1);
  CHECK(mx.components().atoms()[0].point == 1.0);
  // kendall unit squares to the pareto law exactly
  const Measure kd = convolve(ConvSpec::kendall(1.0), Measure::dirac(1.0), Measure::dirac(1.0),
                              10, base);
  CHECK(kd.kind() == MeasureKind::GridDensity);
  CHECK(1.0 - kd.cdf(2.0) == doctest::Approx(0.25).epsilon(1e-4));
  // Monte Carlo fallback for non-atomic inputs
  const Measure emp = convolve(ConvSpec::kendall(1.0), kd, Measure::dirac(1.0), 5000, base);
  CHECK(emp.kind() == MeasureKind::Empirical);
  CHECK(emp.samples().size() == 5000);
  CHECK_THROWS_AS(convolve(ConvSpec::classic(), Measure::empirical({-1.0}),
                           Measure::dirac(1.0), 10, base),
                  argument_error);
}
