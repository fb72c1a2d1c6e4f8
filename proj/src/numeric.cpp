#include "gconv/numeric.hpp"

#include <algorithm>
#include <cmath>

#include "gconv/errors.hpp"

namespace gconv::num {

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw argument_error("trapezoid: size mismatch");
  if (x.size() < 2) return 0.0;
  std::vector<double> cells(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    cells[i] = 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  }
  return pairwise_sum(cells);
}

DeRule::DeRule(double h) {
  const double half_pi = M_PI / 2.0;
  for (int k = 0;; ++k) {
    const double t = k * h;
    const double sh = std::sinh(t);
    const double node = std::tanh(half_pi * sh);
    const double ch = std::cosh(half_pi * sh);
    const double w = h * half_pi * std::cosh(t) / (ch * ch);
    if (1.0 - node < 1e-16 || w < 1e-300) break;
    if (k == 0) {
      nodes.push_back(0.0);
      weights.push_back(w);
    } else {
      nodes.push_back(node);
      weights.push_back(w);
      nodes.push_back(-node);
      weights.push_back(w);
    }
  }
}

namespace {
const DeRule& de_rule() {
  static const DeRule rule;
  return rule;
}
}  // namespace

double integrate_de(const std::function<double(double)>& g, double a, double b) {
  const DeRule& r = de_rule();
  const double mid = 0.5 * (a + b);
  const double rad = 0.5 * (b - a);
  std::vector<double> terms(r.nodes.size());
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    terms[i] = r.weights[i] * g(mid + rad * r.nodes[i]);
  }
  return rad * pairwise_sum(terms);
}

namespace {

// 64 positive abscissae/weights of the 128-point Gauss-Legendre rule are
// overkill to tabulate by hand; generate the rule once by Newton iteration
// on the Legendre polynomial.
struct GlRule {
  std::vector<double> x;  // nodes on (-1,1)
  std::vector<double> w;
  explicit GlRule(std::size_t n) : x(n), w(n) {
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / pp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      x[i] = -z;
      x[n - 1 - i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
      w[n - 1 - i] = w[i];
    }
  }
};

const GlRule& gl128() {
  static const GlRule rule(128);
  return rule;
}

}  // namespace

double integrate_gl(const std::function<double(double)>& g, double a, double b,
                    std::size_t panels) {
  if (panels == 0) panels = 1;
  const GlRule& r = gl128();
  std::vector<double> parts;
  parts.reserve(panels * r.x.size());
  const double step = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + step * static_cast<double>(p);
    const double mid = lo + 0.5 * step;
    const double rad = 0.5 * step;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      parts.push_back(rad * r.w[i] * g(mid + rad * r.x[i]));
    }
  }
  return pairwise_sum(parts);
}

double pairwise_sum(const std::vector<double>& v) {
  // recursion on spans, base case 8
  struct Rec {
    static double sum(const double* p, std::size_t n) {
      if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += p[i];
        return s;
      }
      const std::size_t h = n / 2;
      return sum(p, h) + sum(p + h, n - h);
    }
  };
  return v.empty() ? 0.0 : Rec::sum(v.data(), v.size());
}

double one_minus_sinc(double t) {
  const double a = std::abs(t);
  if (a < 1e-2) {
    const double t2 = t * t;
    return t2 / 6.0 - t2 * t2 / 120.0 + t2 * t2 * t2 / 5040.0;
  }
  return 1.0 - std::sin(t) / t;
}

double sinc(double t) { return 1.0 - one_minus_sinc(t); }

std::vector<double> log_grid(double a, double b, std::size_t n) {
  if (!(a > 0.0) || !(b > a) || n < 2) throw argument_error("log_grid: need 0 < a < b, n >= 2");
  std::vector<double> g(n);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  g.front() = a;
  g.back() = b;
  return g;
}

std::vector<double> linear_grid(double a, double b, std::size_t n) {
  if (!(b > a) || n < 2) throw argument_error("linear_grid: need a < b, n >= 2");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  g.back() = b;
  return g;
}

std::vector<double> merge_grids(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  std::vector<double> dedup;
  dedup.reserve(out.size());
  for (double v : out) {
    if (dedup.empty() || v - dedup.back() > 1e-12 * std::max(1.0, std::abs(v))) {
      dedup.push_back(v);
    }
  }
  return dedup;
}

}  // namespace gconv::num
