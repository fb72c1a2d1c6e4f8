#include "gconv/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "gconv/errors.hpp"
#include "gconv/numeric.hpp"
#include "gconv/parallel.hpp"

namespace gconv {

namespace {

constexpr double kTailQuantile = 1e-8;  // truncation mass recorded on grids
constexpr std::size_t kKernelGridPoints = 4096;

double require_nonneg(double v, const char* what) {
  if (!(v >= 0.0)) throw argument_error(std::string(what) + " must be >= 0");
  return v;
}

// mixing density of the Kingman algebra on (-1,1), total mass 1
double kingman_mixing_density(double s, double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  const double logc = std::lgamma(s + 1.0) - 0.5 * std::log(M_PI) - std::lgamma(s + 0.5);
  return std::exp(logc + (s - 0.5) * std::log1p(-u * u));
}

// cosine transform of the mixing density, cached per s on tanh-sinh nodes
struct KingmanOmegaTable {
  std::vector<double> nodes;
  std::vector<double> wdens;  // quadrature weight times density
};

const KingmanOmegaTable& kingman_omega_table(double s) {
  static std::mutex mu;
  static std::map<double, KingmanOmegaTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  static const num::DeRule rule(1.0 / 128.0);
  KingmanOmegaTable t;
  t.nodes.reserve(rule.nodes.size());
  t.wdens.reserve(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double w = rule.weights[i] * kingman_mixing_density(s, rule.nodes[i]);
    if (w > 0.0) {
      t.nodes.push_back(rule.nodes[i]);
      t.wdens.push_back(w);
    }
  }
  // normalize the discrete rule so Omega(0) is exactly 1
  const double total = num::pairwise_sum(t.wdens);
  for (double& w : t.wdens) w /= total;
  return cache.emplace(s, std::move(t)).first->second;
}

// large-argument branch: Omega(t) = Gamma(s+1) (2/t)^s J_s(t), with the
// Bessel function from its Hankel asymptotic expansion
double kingman_omega_asymptotic(double s, double t) {
  const double mu_ = 4.0 * s * s;
  double p = 1.0, q = 0.0;
  double a = 1.0;  // running a_k / t^k
  for (int k = 0; k < 6; ++k) {
    const double odd = 2.0 * k + 1.0;
    a *= (mu_ - odd * odd) / ((k + 1.0) * 8.0 * t);
    const int idx = k + 1;
    if (idx % 2 == 1) {
      q += (((idx - 1) / 2) % 2 == 0 ? a : -a);
    } else {
      p += ((idx / 2) % 2 == 0 ? a : -a);
    }
  }
  const double phase = t - s * M_PI / 2.0 - M_PI / 4.0;
  const double js =
      std::sqrt(2.0 / (M_PI * t)) * (p * std::cos(phase) - q * std::sin(phase));
  return std::exp(std::lgamma(s + 1.0) + s * std::log(2.0 / t)) * js;
}

double kingman_omega(double s, double t) {
  if (s == -0.5) return std::cos(t);
  if (t > 30.0) return kingman_omega_asymptotic(s, t);
  const KingmanOmegaTable& tab = kingman_omega_table(s);
  std::vector<double> terms(tab.nodes.size());
  for (std::size_t i = 0; i < tab.nodes.size(); ++i) {
    terms[i] = tab.wdens[i] * std::cos(t * tab.nodes[i]);
  }
  return num::pairwise_sum(terms);
}

// theta draw for the Kingman kernel: 2 Beta(s+1/2, s+1/2) - 1
double kingman_theta(double s, RngStream& rng) {
  if (s == -0.5) return rng.uniform() < 0.5 ? -1.0 : 1.0;
  return 2.0 * rng.beta(s + 0.5, s + 0.5) - 1.0;
}

// Pareto density 2a x^{-2a-1} on [1,inf), truncated at the 1 - 1e-8 quantile
// with the cut mass recorded; the grid part is rescaled so the quadrature
// mass is exactly 1 - tail.
FiniteMeasure pareto_component(double two_alpha, double weight) {
  const double cut = std::pow(kTailQuantile, -1.0 / two_alpha);
  std::vector<double> grid = num::log_grid(1.0, cut, kKernelGridPoints);
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = two_alpha * std::pow(grid[i], -two_alpha - 1.0);
  }
  const double raw = num::trapezoid(grid, vals);
  const double scale = (1.0 - kTailQuantile) / raw;
  for (double& v : vals) v *= scale;
  FiniteMeasure fm;
  fm.add_density(grid, vals, weight, kTailQuantile);
  return fm;
}

}  // namespace

// -- ConvSpec ---------------------------------------------------------------

ConvSpec ConvSpec::classic() { return ConvSpec(ConvKind::Classic, 0, 0, 0); }

ConvSpec ConvSpec::symmetric_alpha(double alpha) {
  if (!(alpha > 0.0)) throw argument_error("symmetric convolution needs alpha > 0");
  return ConvSpec(ConvKind::SymmetricAlpha, alpha, 0, 0);
}

ConvSpec ConvSpec::pstable(double p) {
  if (!(p > 0.0)) throw argument_error("p-stable convolution needs p > 0");
  return ConvSpec(ConvKind::PStable, 0, p, 0);
}

ConvSpec ConvSpec::kendall(double alpha) {
  if (!(alpha > 0.0)) throw argument_error("Kendall convolution needs alpha > 0");
  return ConvSpec(ConvKind::Kendall, alpha, 0, 0);
}

ConvSpec ConvSpec::kingman(double s) {
  if (!(s >= -0.5)) throw argument_error("Kingman convolution needs s >= -1/2");
  return ConvSpec(ConvKind::Kingman, 0, 0, s);
}

ConvSpec ConvSpec::max() { return ConvSpec(ConvKind::Max, 0, 0, 0); }

ConvSpec ConvSpec::parse(const std::string& text) {
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
  if (name == "classic") return classic();
  if (name == "max") return max();
  if (name == "symmetric") return symmetric_alpha(param("a"));
  if (name == "pstable") return pstable(param("p"));
  if (name == "kendall") return kendall(param("a"));
  if (name == "kingman") return kingman(param("s"));
  throw argument_error("unknown convolution '" + text + "'");
}

std::string ConvSpec::to_string() const {
  std::ostringstream os;
  switch (kind_) {
    case ConvKind::Classic:
      return "classic";
    case ConvKind::Max:
      return "max";
    case ConvKind::SymmetricAlpha:
      os << "symmetric:a=" << format_double(alpha_);
      break;
    case ConvKind::PStable:
      os << "pstable:p=" << format_double(p_);
      break;
    case ConvKind::Kendall:
      os << "kendall:a=" << format_double(alpha_);
      break;
    case ConvKind::Kingman:
      os << "kingman:s=" << format_double(s_);
      break;
  }
  return os.str();
}

// -- kernels ------------------------------------------------------------------

Measure kernel_measure(const ConvSpec& spec, double x, double y) {
  require_nonneg(x, "x");
  require_nonneg(y, "y");
  switch (spec.kind()) {
    case ConvKind::Classic:
      return Measure::dirac(x + y);
    case ConvKind::Max:
      return Measure::dirac(std::max(x, y));
    case ConvKind::PStable: {
      const double p = spec.p();
      return Measure::dirac(std::pow(std::pow(x, p) + std::pow(y, p), 1.0 / p));
    }
    case ConvKind::SymmetricAlpha: {
      const double a = spec.alpha();
      const double xa = std::pow(x, a), ya = std::pow(y, a);
      const double lo = std::pow(std::abs(xa - ya), 1.0 / a);
      const double hi = std::pow(xa + ya, 1.0 / a);
      if (lo == hi) return Measure::dirac(hi);
      return Measure::dirac_mix({{lo, 0.5}, {hi, 0.5}});
    }
    case ConvKind::Kendall: {
      const double lo = std::min(x, y), hi = std::max(x, y);
      if (hi == 0.0) return Measure::dirac(0.0);
      if (lo == 0.0) return Measure::dirac(hi);
      const double r = std::pow(lo / hi, spec.alpha());
      FiniteMeasure fm = FiniteMeasure::point_mass(hi, 1.0 - r);
      fm.add(pareto_component(2.0 * spec.alpha(), r).scaled_by(hi));
      return Measure::mixture(std::move(fm));
    }
    case ConvKind::Kingman: {
      if (x == 0.0 || y == 0.0) return Measure::dirac(std::hypot(x, y));
      const double s = spec.s();
      if (s == -0.5) {
        const double lo = std::abs(x - y), hi = x + y;
        if (lo == hi) return Measure::dirac(hi);
        return Measure::dirac_mix({{lo, 0.5}, {hi, 0.5}});
      }
      // u = sqrt(x^2+y^2+2xy theta); density h(u) = f_s(theta(u)) u/(xy) on
      // (|x-y|, x+y). Endpoints are integrable singularities for s < 1/2, so
      // the grid is graded quadratically toward them.
      const double lo = std::abs(x - y), hi = x + y;
      const std::size_t n = kKernelGridPoints;
      std::vector<double> grid(n), vals(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double w = static_cast<double>(i) / static_cast<double>(n - 1);
        const double theta = -std::cos(M_PI * w);  // graded toward +-1
        double u2 = x * x + y * y + 2.0 * x * y * theta;
        const double u = std::sqrt(std::max(u2, 0.0));
        grid[i] = u;
        vals[i] = kingman_mixing_density(s, theta) * u / (x * y);
      }
      grid.front() = lo;
      grid.back() = hi;
      if (s < 0.5) {  // density blows up at the ends; clip the end nodes
        vals.front() = vals[1];
        vals.back() = vals[n - 2];
      }
      // strictly increasing grid (graded cos spacing can collide near ends)
      std::vector<double> g2, v2;
      for (std::size_t i = 0; i < n; ++i) {
        if (g2.empty() || grid[i] > g2.back() * (1.0 + 1e-14) + 1e-300) {
          g2.push_back(grid[i]);
          v2.push_back(vals[i]);
        }
      }
      FiniteMeasure fm;
      fm.add_density(g2, v2, 1.0, 0.0);
      fm.normalize();
      return Measure::mixture(std::move(fm));
    }
  }
  throw argument_error("unreachable kernel kind");
}

double kernel_sample(const ConvSpec& spec, double x, double y, RngStream& rng) {
  require_nonneg(x, "x");
  require_nonneg(y, "y");
  switch (spec.kind()) {
    case ConvKind::Classic:
      return x + y;
    case ConvKind::Max:
      return std::max(x, y);
    case ConvKind::PStable: {
      const double p = spec.p();
      return std::pow(std::pow(x, p) + std::pow(y, p), 1.0 / p);
    }
    case ConvKind::SymmetricAlpha: {
      const double a = spec.alpha();
      const double xa = std::pow(x, a), ya = std::pow(y, a);
      return rng.uniform() < 0.5 ? std::pow(std::abs(xa - ya), 1.0 / a)
                                 : std::pow(xa + ya, 1.0 / a);
    }
    case ConvKind::Kendall: {
      const double lo = std::min(x, y), hi = std::max(x, y);
      if (hi == 0.0) return 0.0;
      if (lo == 0.0) return hi;
      const double r = std::pow(lo / hi, spec.alpha());
      if (rng.uniform() < r) {
        // Pareto(2 alpha) by inverse CDF
        return hi * std::pow(rng.uniform(), -0.5 / spec.alpha());
      }
      return hi;
    }
    case ConvKind::Kingman: {
      if (x == 0.0 || y == 0.0) return std::hypot(x, y);
      const double theta = kingman_theta(spec.s(), rng);
      return std::sqrt(std::max(x * x + y * y + 2.0 * x * y * theta, 0.0));
    }
  }
  throw argument_error("unreachable kernel kind");
}

// -- transform kernel ---------------------------------------------------------

double omega(const ConvSpec& spec, double t) {
  if (!(t >= 0.0)) throw argument_error("omega: t must be >= 0");
  switch (spec.kind()) {
    case ConvKind::Classic:
      return std::exp(-t);
    case ConvKind::PStable:
      return std::exp(-std::pow(t, spec.p()));
    case ConvKind::Kendall: {
      const double v = 1.0 - std::pow(t, spec.alpha());
      return v > 0.0 ? v : 0.0;
    }
    case ConvKind::Max:
      return t <= 1.0 ? 1.0 : 0.0;
    case ConvKind::SymmetricAlpha:
      // image of the two-point mixing law under the power map
      return std::cos(std::pow(t, spec.alpha()));
    case ConvKind::Kingman:
      return kingman_omega(spec.s(), t);
  }
  throw argument_error("unreachable omega kind");
}

double omega_support_end(const ConvSpec& spec) {
  switch (spec.kind()) {
    case ConvKind::Kendall:  // (1 - t^alpha)+ vanishes from t = 1 on
    case ConvKind::Max:
      return 1.0;
    default:
      return std::numeric_limits<double>::infinity();
  }
}

double kappa(const ConvSpec& spec) {
  switch (spec.kind()) {
    case ConvKind::Classic:
      return 1.0;
    case ConvKind::PStable:
      return spec.p();
    case ConvKind::Kendall:
      return spec.alpha();
    case ConvKind::Kingman:
      return 2.0;
    case ConvKind::Max:
      return std::numeric_limits<double>::infinity();
    case ConvKind::SymmetricAlpha:
      return 2.0 * spec.alpha();
  }
  throw argument_error("unreachable kappa kind");
}

// -- stable laws ----------------------------------------------------------------

namespace {

void check_stable_p(const ConvSpec& spec, double p) {
  if (!(p > 0.0)) throw argument_error("stable law exponent must be > 0");
  if (p > kappa(spec) * (1.0 + 1e-12)) {
    throw argument_error("stable exponent p=" + format_double(p) + " exceeds kappa=" +
                         format_double(kappa(spec)) + " for " + spec.to_string());
  }
}

double kendall_stable_density(double alpha, double p, double x) {
  if (!(x > 0.0)) return 0.0;
  const double xp = std::pow(x, -p);
  return p * std::pow(x, -p - 1.0) * (1.0 - p / alpha + (p / alpha) * xp) * std::exp(-xp);
}

double kendall_stable_cdf(double alpha, double p, double x) {
  if (!(x > 0.0)) return 0.0;
  const double xp = std::pow(x, -p);
  return std::exp(-xp) * (1.0 + (p / alpha) * xp);
}

double max_stable_density(double p, double x) {
  if (!(x > 0.0)) return 0.0;
  return p * std::pow(x, -p - 1.0) * std::exp(-std::pow(x, -p));
}

double max_stable_cdf(double p, double x) { return x > 0.0 ? std::exp(-std::pow(x, -p)) : 0.0; }

double kingman_f1(double s, double x) {
  if (!(x > 0.0)) return 0.0;
  const double logc = std::lgamma(s + 1.5) - 0.5 * std::log(M_PI) - std::lgamma(s + 1.0);
  return std::exp(logc + s * std::log(x) - (s + 1.5) * std::log1p(x));
}

double kingman_f2(double s, double x) {
  if (!(x > 0.0)) return 0.0;
  return std::exp(s * std::log(x) - 0.5 * x - (s + 1.0) * std::log(2.0) - std::lgamma(s + 1.0));
}

// sigma_2 for the Kingman algebra: 2 sqrt(Gamma(s+1)); its square has the
// f2 shape at twice the scale
double kingman_sigma2_sample(double s, RngStream& rng) {
  return 2.0 * std::sqrt(rng.gamma(s + 1.0));
}

double kingman_sigma_cdf(double s, double p, double x) {
  if (!(x > 0.0)) return 0.0;
  if (p == 2.0) {
    // P(2 sqrt(G) <= x) = P(G <= x^2/4), regularized lower incomplete gamma
    // evaluated by series / continued fraction
    const double a = s + 1.0, z = 0.25 * x * x;
    // series for the regularized P(a, z)
    if (z < a + 1.0) {
      double term = 1.0 / a, sum = term;
      for (int k = 1; k < 500; ++k) {
        term *= z / (a + k);
        sum += term;
        if (term < 1e-16 * sum) break;
      }
      return sum * std::exp(-z + a * std::log(z) - std::lgamma(a));
    }
    // continued fraction for Q(a, z)
    double b = z + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int k = 1; k < 500; ++k) {
      const double an = -k * (k - a);
      b += 2.0;
      d = an * d + b;
      if (std::abs(d) < 1e-300) d = 1e-300;
      c = b + an / c;
      if (std::abs(c) < 1e-300) c = 1e-300;
      d = 1.0 / d;
      const double delta = d * c;
      h *= delta;
      if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return 1.0 - h * std::exp(-z + a * std::log(z) - std::lgamma(a));
  }
  if (p == 1.0) {
    // sigma_1^2 ~ f1; P(sigma_1 <= x) = integral of f1 over (0, x^2)
    const double v = x * x;
    return num::integrate_de([s](double u) { return kingman_f1(s, u); }, 0.0, v);
  }
  throw unsupported_error("kingman stable cdf: closed form only for p in {1,2}");
}

}  // namespace

double stable_density(const ConvSpec& spec, double p, double x) {
  check_stable_p(spec, p);
  switch (spec.kind()) {
    case ConvKind::Kendall:
      return kendall_stable_density(spec.alpha(), p, x);
    case ConvKind::Max:
      if (!std::isfinite(p)) throw unsupported_error("max-stable density needs finite p");
      return max_stable_density(p, x);
    case ConvKind::Kingman:
      if (p == 1.0) return kingman_f1(spec.s(), x);
      if (p == 2.0) return kingman_f2(spec.s(), x);
      throw unsupported_error("kingman stable density: closed form only for p in {1,2}");
    default:
      throw unsupported_error("no closed-form stable density for " + spec.to_string() +
                              "; fall back to Monte Carlo via stable_sample");
  }
}

double stable_cdf(const ConvSpec& spec, double p, double x) {
  check_stable_p(spec, p);
  switch (spec.kind()) {
    case ConvKind::Kendall:
      return kendall_stable_cdf(spec.alpha(), p, x);
    case ConvKind::Max:
      return max_stable_cdf(p, x);
    case ConvKind::Kingman:
      return kingman_sigma_cdf(spec.s(), p, x);
    default:
      throw unsupported_error("no closed-form stable cdf for " + spec.to_string());
  }
}

double stable_sample(const ConvSpec& spec, double p, RngStream& rng) {
  check_stable_p(spec, p);
  switch (spec.kind()) {
    case ConvKind::Kendall: {
      const double alpha = spec.alpha();
      if (rng.uniform() < 1.0 - p / alpha) {
        return std::pow(rng.exponential(), -1.0 / p);  // Frechet(p) component
      }
      return std::pow(rng.gamma(2.0), -1.0 / p);
    }
    case ConvKind::Max:
      if (!std::isfinite(p)) return 1.0;  // sigma_inf is the unit mass
      return std::pow(rng.exponential(), -1.0 / p);
    case ConvKind::Kingman: {
      const double s = spec.s();
      const double base = kingman_sigma2_sample(s, rng);
      if (p == 2.0) return base;
      return std::sqrt(one_sided_stable(0.5 * p, rng)) * base;
    }
    case ConvKind::PStable: {
      const double q = spec.p();
      if (p == q) return 1.0;
      return std::pow(one_sided_stable(p / q, rng), 1.0 / q);
    }
    case ConvKind::Classic: {
      if (p == 1.0) return 1.0;
      return one_sided_stable(p, rng);
    }
    case ConvKind::SymmetricAlpha: {
      // image of the Kingman s = -1/2 algebra under the power map
      const double a = spec.alpha();
      const double q = p / a;
      double base = std::sqrt(2.0) * std::abs(rng.normal());
      if (q < 2.0) base *= std::sqrt(one_sided_stable(0.5 * q, rng));
      return std::pow(base, 1.0 / a);
    }
  }
  throw argument_error("unreachable stable kind");
}

// -- generic convolution --------------------------------------------------------

Measure convolve(const ConvSpec& spec, const Measure& a, const Measure& b, std::size_t n,
                 const RngStream& base) {
  if (!a.nonnegative_support() || !b.nonnegative_support()) {
    throw argument_error("convolve: measures must live on [0, inf)");
  }
  if (a.kind() == MeasureKind::DiracMix && b.kind() == MeasureKind::DiracMix) {
    FiniteMeasure out;
    for (const Atom& ax : a.components().atoms()) {
      for (const Atom& by : b.components().atoms()) {
        out.add(kernel_measure(spec, ax.point, by.point).components(), ax.weight * by.weight);
      }
    }
    out.tidy_atoms();
    return Measure::mixture(std::move(out));
  }
  std::vector<double> draws = par::draw_batch(n, base, [&](RngStream& rng) {
    const double x = a.sample(rng);
    const double y = b.sample(rng);
    return kernel_sample(spec, x, y, rng);
  });
  return Measure::empirical(std::move(draws));
}

// -- stable variate primitives ----------------------------------------------------

double one_sided_stable(double beta, RngStream& rng) {
  if (!(beta > 0.0) || !(beta < 1.0)) throw argument_error("one_sided_stable: beta in (0,1)");
  const double v = M_PI * rng.uniform();
  const double w = rng.exponential();
  return std::sin(beta * v) * std::pow(std::sin((1.0 - beta) * v) / w, (1.0 - beta) / beta) /
         std::pow(std::sin(v), 1.0 / beta);
}

double symmetric_stable(double p, RngStream& rng) {
  if (!(p > 0.0) || !(p <= 2.0)) throw argument_error("symmetric_stable: p in (0,2]");
  const double v = M_PI * (rng.uniform() - 0.5);
  if (p == 1.0) return std::tan(v);
  const double w = rng.exponential();
  return std::sin(p * v) / std::pow(std::cos(v), 1.0 / p) *
         std::pow(std::cos((1.0 - p) * v) / w, (1.0 - p) / p);
}

}  // namespace gconv
