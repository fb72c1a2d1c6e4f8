#include "gconv/weakstable.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "gconv/convolution.hpp"
#include "gconv/errors.hpp"
#include "gconv/numeric.hpp"

namespace gconv {

WeaklyStableLaw WeaklyStableLaw::symmetric_stable(double p) {
  if (!(p > 0.0) || !(p <= 2.0)) throw argument_error("symmetric stable law needs p in (0,2]");
  return WeaklyStableLaw(WeakKind::SymmetricStable, p, 0, 0.0);
}

WeaklyStableLaw WeaklyStableLaw::sphere_uniform(int n) {
  if (n < 2) throw argument_error("sphere uniform law needs n >= 2");
  return WeaklyStableLaw(WeakKind::SphereUniform, 0.0, n, 0.0);
}

WeaklyStableLaw WeaklyStableLaw::kendall_mu(double alpha) {
  if (!(alpha > 0.0) || !(alpha <= 1.0)) throw argument_error("kendall mu law needs alpha in (0,1]");
  return WeaklyStableLaw(WeakKind::KendallMu, 0.0, 0, alpha);
}

WeaklyStableLaw WeaklyStableLaw::two_point() {
  return WeaklyStableLaw(WeakKind::TwoPoint, 0.0, 0, 0.0);
}

WeaklyStableLaw WeaklyStableLaw::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  auto param = [&](const char* key) {
    if (colon == std::string::npos) throw argument_error("'" + text + "': missing " + key + "=");
    const std::string rest = text.substr(colon + 1);
    const std::string prefix = std::string(key) + "=";
    if (rest.rfind(prefix, 0) != 0) {
      throw argument_error("'" + text + "': expected " + prefix + "<value>");
    }
    try {
      return std::stod(rest.substr(prefix.size()));
    } catch (const std::exception&) {
      throw argument_error("'" + text + "': bad number");
    }
  };
  if (name == "twopoint") return two_point();
  if (name == "sas") return symmetric_stable(param("p"));
  if (name == "sphere") return sphere_uniform(static_cast<int>(param("n")));
  if (name == "kendallmu") return kendall_mu(param("a"));
  throw argument_error("unknown weakly stable law '" + text + "'");
}

std::string WeaklyStableLaw::to_string() const {
  switch (kind_) {
    case WeakKind::TwoPoint:
      return "twopoint";
    case WeakKind::SymmetricStable:
      return "sas:p=" + format_double(p_);
    case WeakKind::SphereUniform:
      return "sphere:n=" + std::to_string(n_);
    case WeakKind::KendallMu:
      return "kendallmu:a=" + format_double(alpha_);
  }
  return "?";
}

std::size_t WeaklyStableLaw::dim() const {
  return kind_ == WeakKind::SphereUniform ? static_cast<std::size_t>(n_) : 1;
}

double WeaklyStableLaw::kappa() const {
  switch (kind_) {
    case WeakKind::SymmetricStable:
      return p_;
    case WeakKind::SphereUniform:
    case WeakKind::TwoPoint:
      return 2.0;
    case WeakKind::KendallMu:
      return alpha_;
  }
  return 2.0;
}

double WeaklyStableLaw::tail(double s) const {
  if (!(s >= 0.0)) throw argument_error("tail: s must be >= 0");
  switch (kind_) {
    case WeakKind::TwoPoint:
    case WeakKind::SphereUniform:
      return s < 1.0 ? 1.0 : 0.0;  // bounded by the unit ball
    case WeakKind::SymmetricStable: {
      if (p_ == 2.0) return std::erfc(s / 2.0);  // N(0,2) two-sided tail
      if (s <= 1.0) return 1.0;
      const double c = 2.0 / M_PI * std::tgamma(p_) * std::sin(M_PI * p_ / 2.0);
      return std::min(1.0, c * std::pow(s, -p_));
    }
    case WeakKind::KendallMu: {
      if (s <= 1.0) return 1.0;
      const double c = 2.0 / M_PI * std::tgamma(alpha_) * std::sin(M_PI * alpha_ / 2.0);
      return std::min(1.0, c * std::pow(s, -alpha_));
    }
  }
  return 1.0;
}

double mu_cf(const WeaklyStableLaw& law, double t) {
  const double a = std::abs(t);
  switch (law.kind()) {
    case WeakKind::SymmetricStable:
      return std::exp(-std::pow(a, law.p()));
    case WeakKind::SphereUniform:
      return omega(ConvSpec::kingman(0.5 * (law.n() - 2)), a);
    case WeakKind::KendallMu: {
      const double v = 1.0 - std::pow(a, law.alpha());
      return v > 0.0 ? v : 0.0;
    }
    case WeakKind::TwoPoint:
      return std::cos(t);
  }
  throw argument_error("unreachable law kind");
}

// -- generator sampling -------------------------------------------------------

namespace {

// tabulated inverse CDF of |X| for the KendallMu generator; the cf is the
// only closed form, so the CDF comes from its sine transform and the tail
// from the |x|^{-alpha} asymptote matched at the table end.
struct KendallMuTable {
  double alpha = 0.0;
  double x_end = 0.0;
  double g_end = 0.0;   // P(|X| <= x_end)
  double tail_c = 0.0;  // P(|X| > x) = tail_c * x^{-alpha} beyond x_end
  std::vector<double> x, g;

  double sample_abs(RngStream& rng) const {
    const double u = rng.uniform();
    if (u >= g_end) return std::pow(tail_c / (1.0 - u), 1.0 / alpha);
    const auto it = std::upper_bound(g.begin(), g.end(), u);
    const std::size_t hi = std::max<std::size_t>(1, static_cast<std::size_t>(it - g.begin()));
    const std::size_t lo = hi - 1;
    const double span = g[hi] - g[lo];
    const double w = span > 0.0 ? (u - g[lo]) / span : 0.5;
    return x[lo] + w * (x[hi] - x[lo]);
  }
};

KendallMuTable build_kendall_mu_table(double alpha) {
  KendallMuTable t;
  t.alpha = alpha;
  t.x_end = 200.0;
  std::vector<double> grid = num::linear_grid(0.0, 4.0, 257);
  const std::vector<double> logpart = num::log_grid(4.0, t.x_end, 257);
  grid.insert(grid.end(), logpart.begin() + 1, logpart.end());
  t.x = grid;
  t.g.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double xv = grid[i];
    if (xv == 0.0) {
      t.g[i] = 0.0;
      continue;
    }
    // P(|X| <= x) = (2/pi) ∫_0^1 sin(u x)(1 - u^alpha)/u du
    const std::size_t panels = 1 + static_cast<std::size_t>(xv / 16.0);
    const double integral = num::integrate_gl(
        [&](double u) {
          const double w = 1.0 - std::pow(u, alpha);
          return u < 1e-300 ? xv * w : std::sin(u * xv) * w / u;
        },
        0.0, 1.0, panels);
    t.g[i] = 2.0 / M_PI * integral;
  }
  for (std::size_t i = 1; i < t.g.size(); ++i) {
    if (!(t.g[i] > t.g[i - 1]) || !(t.g[i] < 1.0)) {
      throw numeric_error("kendall mu inverse-CDF table is not monotone near x=" +
                          format_double(t.x[i]));
    }
  }
  t.g_end = t.g.back();
  t.tail_c = (1.0 - t.g_end) * std::pow(t.x_end, alpha);
  return t;
}

const KendallMuTable& kendall_mu_table(double alpha) {
  static std::mutex mu;
  static std::map<double, KendallMuTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(alpha);
  if (it == cache.end()) it = cache.emplace(alpha, build_kendall_mu_table(alpha)).first;
  return it->second;
}

}  // namespace

std::vector<double> mu_sample(const WeaklyStableLaw& law, RngStream& rng) {
  switch (law.kind()) {
    case WeakKind::TwoPoint:
      return {rng.uniform() < 0.5 ? 1.0 : -1.0};
    case WeakKind::SymmetricStable:
      return {symmetric_stable(law.p(), rng)};
    case WeakKind::SphereUniform: {
      std::vector<double> v(law.dim());
      double norm2 = 0.0;
      do {
        norm2 = 0.0;
        for (double& c : v) {
          c = rng.normal();
          norm2 += c * c;
        }
      } while (norm2 <= 0.0);
      const double inv = 1.0 / std::sqrt(norm2);
      for (double& c : v) c *= inv;
      return v;
    }
    case WeakKind::KendallMu: {
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      return {sign * kendall_mu_table(law.alpha()).sample_abs(rng)};
    }
  }
  throw argument_error("unreachable law kind");
}

// -- representable pairs ----------------------------------------------------------

namespace {

double dot_scaled_norm(double s, const std::vector<double>& x, double t,
                       const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = s * x[i] + t * y[i];
    acc += v * v;
  }
  return std::sqrt(acc);
}

void check_args(double s, double t) {
  if (!(s >= 0.0) || !(t >= 0.0)) {
    throw argument_error("representable pair: coefficients must be >= 0");
  }
}

}  // namespace

RepresentablePair representable_pair(const WeaklyStableLaw& law) {
  RepresentablePair pair;
  switch (law.kind()) {
    case WeakKind::TwoPoint:
      pair.theta = [](double s, const std::vector<double>& x, double t,
                      const std::vector<double>& y) {
        check_args(s, t);
        return std::abs(s * x[0] + t * y[0]);
      };
      pair.chi = [](double s, const std::vector<double>& x, double t,
                    const std::vector<double>& y) {
        const double v = s * x[0] + t * y[0];
        return std::vector<double>{v < 0.0 ? -1.0 : 1.0};  // 0 maps to +1
      };
      return pair;
    case WeakKind::SymmetricStable: {
      const double p = law.p();
      pair.theta = [p](double s, const std::vector<double>&, double t,
                       const std::vector<double>&) {
        check_args(s, t);
        return std::pow(std::pow(s, p) + std::pow(t, p), 1.0 / p);
      };
      pair.chi = [p](double s, const std::vector<double>& x, double t,
                     const std::vector<double>& y) {
        const double norm = std::pow(std::pow(s, p) + std::pow(t, p), 1.0 / p);
        if (norm == 0.0) return x;
        return std::vector<double>{(s * x[0] + t * y[0]) / norm};
      };
      return pair;
    }
    case WeakKind::SphereUniform:
      pair.theta = [](double s, const std::vector<double>& x, double t,
                      const std::vector<double>& y) {
        check_args(s, t);
        return dot_scaled_norm(s, x, t, y);
      };
      pair.chi = [](double s, const std::vector<double>& x, double t,
                    const std::vector<double>& y) {
        const double norm = dot_scaled_norm(s, x, t, y);
        if (norm == 0.0) return x;
        std::vector<double> v(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) v[i] = (s * x[i] + t * y[i]) / norm;
        return v;
      };
      return pair;
    case WeakKind::KendallMu:
      throw unsupported_error("no constructive (Theta, Chi) pair is known for kendallmu");
  }
  throw argument_error("unreachable law kind");
}

WeakSumChain weak_sum_chain(const WeaklyStableLaw& law, const RepresentablePair& pair,
                            const std::vector<double>& thetas, RngStream& rng) {
  for (double v : thetas) {
    if (!(v >= 0.0)) throw argument_error("weak_sum_chain: coefficients must be >= 0");
  }
  WeakSumChain chain;
  chain.S.reserve(thetas.size());
  chain.X.reserve(thetas.size());
  chain.Z.reserve(thetas.size());
  double s = 0.0;
  std::vector<double> state;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const std::vector<double> draw = mu_sample(law, rng);
    if (i == 0) {
      s = thetas[0];
      state = draw;
    } else {
      const double s_next = pair.theta(s, state, thetas[i], draw);
      state = pair.chi(s, state, thetas[i], draw);
      s = s_next;
    }
    chain.S.push_back(s);
    chain.X.push_back(state);
    std::vector<double> z(state.size());
    for (std::size_t d = 0; d < state.size(); ++d) z[d] = s * state[d];
    chain.Z.push_back(std::move(z));
  }
  return chain;
}

// -- weak exponent representation ---------------------------------------------------

WeakLevyTriple::WeakLevyTriple(WeaklyStableLaw law, double A, FiniteMeasure nu)
    : law_(law), A_(A), nu_(std::move(nu)), mu_tail_integral_(0.0) {
  if (!(A >= 0.0)) throw argument_error("WeakLevyTriple: A must be >= 0");
  for (const Atom& a : nu_.atoms()) {
    if (!(a.point > 0.0)) throw argument_error("WeakLevyTriple: nu atoms must sit in (0, inf)");
  }
  if (!nu_.grid().empty() && nu_.grid().front() < 0.0) {
    throw argument_error("WeakLevyTriple: nu is stored on (0, inf)");
  }
  mu_tail_integral_ = nu_.integrate([this](double s) { return law_.tail(std::abs(s)); });
  if (!std::isfinite(mu_tail_integral_)) {
    throw numeric_error("WeakLevyTriple: integral of the mu-tail against nu is not finite");
  }
}

double weak_lk_cf(const WeakLevyTriple& triple, double t) {
  const double at = std::abs(t);
  const double integral =
      triple.nu().integrate([&](double s) { return 1.0 - mu_cf(triple.law(), at * s); });
  const double exponent = -triple.A() * std::pow(at, triple.law().kappa()) - integral;
  if (!std::isfinite(exponent)) {
    throw numeric_error("weak_lk_cf: divergent exponent at t=" + format_double(t));
  }
  return std::exp(exponent);
}

}  // namespace gconv
