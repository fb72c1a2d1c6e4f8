#include "gconv/weakmeasure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "gconv/convolution.hpp"
#include "gconv/errors.hpp"
#include "gconv/numeric.hpp"
#include "gconv/parallel.hpp"
#include "gconv/stats.hpp"

namespace gconv {

ControlMeasure ControlMeasure::lebesgue(double c) {
  if (!(c > 0.0)) throw argument_error("control measure needs c > 0");
  ControlMeasure m;
  m.lebesgue_c = c;
  return m;
}

double ControlMeasure::mass(double lo, double hi) const {
  if (!(lo <= hi) || !(lo >= 0.0)) throw argument_error("control mass: need 0 <= lo <= hi");
  double m = lebesgue_c * (hi - lo);
  if (!extra.empty()) m += extra.mass_below(hi) - extra.mass_below(lo);
  return m;
}

WeakJumpBase WeakJumpBase::compound_poisson(double a, double atom) {
  if (!(a > 0.0)) throw argument_error("compound Poisson base needs a > 0");
  if (!(atom > 0.0)) throw argument_error("compound Poisson base needs a positive jump atom");
  WeakJumpBase b;
  b.a_ = a;
  b.atom_ = atom;
  return b;
}

WeakJumpBase WeakJumpBase::stable(double beta) {
  if (!(beta > 0.0) || !(beta < 1.0)) throw argument_error("stable base needs beta in (0,1)");
  WeakJumpBase b;
  b.stable_ = true;
  b.beta_ = beta;
  return b;
}

WeakRandomMeasureSpec::WeakRandomMeasureSpec(WeaklyStableLaw l, WeakJumpBase b, ControlMeasure c)
    : law(l), base(b), control(std::move(c)) {
  if (base.is_stable() && law.kind() != WeakKind::SymmetricStable) {
    throw unsupported_error("stable jump base is only supported for the symmetric stable generator");
  }
  if (!base.is_stable()) representable_pair(law);  // folding needs the pair; throws if unsupported
}

namespace {

// one cell value: the radial draw of lambda^{(rho)} and its paired direction
WeakCellDraw draw_cell(const WeakRandomMeasureSpec& spec, const RepresentablePair* pair,
                       double rho, RngStream& rng) {
  WeakCellDraw cell;
  if (rho <= 0.0) {
    cell.theta = 0.0;
    cell.y = mu_sample(spec.law, rng);
    return cell;
  }
  if (spec.base.is_stable()) {
    const double p = spec.law.kappa() * spec.base.beta();
    cell.theta = std::pow(rho, 1.0 / p) *
                 std::pow(one_sided_stable(spec.base.beta(), rng), 1.0 / spec.law.kappa());
    cell.y = mu_sample(spec.law, rng);
    return cell;
  }
  const std::uint64_t n = rng.poisson(rho * spec.base.intensity());
  if (n == 0) {
    cell.theta = 0.0;
    cell.y = mu_sample(spec.law, rng);
    return cell;
  }
  double s = spec.base.atom();
  std::vector<double> state = mu_sample(spec.law, rng);
  for (std::uint64_t i = 1; i < n; ++i) {
    const std::vector<double> x = mu_sample(spec.law, rng);
    const double s_next = pair->theta(s, state, spec.base.atom(), x);
    state = pair->chi(s, state, spec.base.atom(), x);
    s = s_next;
  }
  cell.theta = s;
  cell.y = std::move(state);
  return cell;
}

}  // namespace

std::vector<WeakCellDraw> weak_measure_eval(const WeakRandomMeasureSpec& spec,
                                            const std::vector<std::pair<double, double>>& cells,
                                            RngStream& rng) {
  std::vector<std::pair<double, double>> sorted(cells);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!(sorted[i].first < sorted[i].second) || sorted[i].first < 0.0) {
      throw argument_error("weak_measure_eval: cells must be nonempty intervals in [0, inf)");
    }
    if (i > 0 && sorted[i].first < sorted[i - 1].second) {
      throw argument_error("weak_measure_eval: cells must be disjoint");
    }
  }
  RepresentablePair pair;
  const RepresentablePair* pair_ptr = nullptr;
  if (!spec.base.is_stable()) {
    pair = representable_pair(spec.law);
    pair_ptr = &pair;
  }
  // advance the caller's stream so repeated evaluations are independent,
  // then give every cell its own derived stream
  const RngStream cell_base = rng.child(rng.next_u64());
  std::vector<WeakCellDraw> out(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    RngStream cell_rng = cell_base.child(i);
    out[i] = draw_cell(spec, pair_ptr, spec.control.mass(cells[i].first, cells[i].second),
                       cell_rng);
  }
  return out;
}

// -- closed-form unit-jump laws -------------------------------------------------

namespace {

double log_poisson_weight(double a, std::size_t k) {
  return -a + static_cast<double>(k) * std::log(a) - std::lgamma(static_cast<double>(k) + 1.0);
}

Measure kendall_mu_poisson(double alpha, double ct, std::size_t) {
  FiniteMeasure fm;
  fm.add_atom(0.0, std::exp(-ct));
  fm.add_atom(-1.0, 0.5 * ct * std::exp(-ct));
  fm.add_atom(1.0, 0.5 * ct * std::exp(-ct));
  // symmetric density (alpha ct^2 / 2) |s|^{-2a-1} e^{-ct |s|^{-a}} on |s| > 1;
  // the grid spans both sides with an explicit zero plateau over (-1, 1)
  const double tail_each = 1e-10;  // one-sided mass beyond the cut
  const double cut = std::pow(0.25 * ct * ct / tail_each, 1.0 / (2.0 * alpha));
  const std::size_t n = 2048;
  std::vector<double> pos = num::log_grid(1.0, std::max(cut, 8.0), n);
  auto dens = [&](double u) {
    return 0.5 * alpha * ct * ct * std::pow(u, -2.0 * alpha - 1.0) *
           std::exp(-ct * std::pow(u, -alpha));
  };
  std::vector<double> grid, vals;
  grid.reserve(2 * n + 2);
  vals.reserve(2 * n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    grid.push_back(-pos[n - 1 - i]);
    vals.push_back(dens(pos[n - 1 - i]));
  }
  grid.push_back(-1.0 + 1e-9);
  vals.push_back(0.0);
  grid.push_back(1.0 - 1e-9);
  vals.push_back(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    grid.push_back(pos[i]);
    vals.push_back(dens(pos[i]));
  }
  // the analytic density mass is 1 - e^{-ct}(1 + ct); rescale the tabulated
  // part to carry exactly that
  const double target = 1.0 - std::exp(-ct) * (1.0 + ct);
  const double raw = num::trapezoid(grid, vals);
  for (double& v : vals) v *= target / raw;
  fm.add_density(grid, vals, 1.0, 0.0);
  return Measure::mixture(std::move(fm));
}

Measure sphere3_poisson(double ct, std::size_t k_max) {
  // exp(ct u) * (delta_0 - ct u + ct lambda_0) with u the uniform law on
  // [-1,1]: atoms e^{-ct}(delta_0 + ct lambda_0) plus the series density
  //   e^{-ct} [ sum_{m>=1} (ct)^m (1-m)/m! f^(m)(x)
  //           + ct sum_{n>=1} (ct)^n/n! (f^(n)(x-1)+f^(n)(x+1))/2 ].
  FiniteMeasure fm;
  fm.add_atom(0.0, std::exp(-ct));
  fm.add_atom(-1.0, 0.5 * ct * std::exp(-ct));
  fm.add_atom(1.0, 0.5 * ct * std::exp(-ct));
  const double span = static_cast<double>(k_max) + 1.0;
  const std::size_t n_pts = 4096;
  std::vector<double> grid = num::linear_grid(-span, span, n_pts);
  std::vector<double> vals(grid.size(), 0.0);
  for (std::size_t m = 1; m <= k_max; ++m) {
    const double w = std::exp(log_poisson_weight(ct, m));
    const double mm = static_cast<double>(m);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = grid[i];
      vals[i] += w * ((1.0 - mm) * uniform_conv_power_density(m, x) +
                      0.5 * ct * (uniform_conv_power_density(m, x - 1.0) +
                                  uniform_conv_power_density(m, x + 1.0)));
    }
  }
  double worst = 0.0;
  for (double& v : vals) {
    worst = std::min(worst, v);
    if (v < 0.0) v = 0.0;  // series cancellation leaves dust at the grid scale
  }
  if (worst < -1e-6) {
    throw numeric_error("sphere unit-jump density went negative: " + format_double(worst));
  }
  FiniteMeasure dens;
  dens.add_density(grid, vals, 1.0, 0.0);
  const double target = 1.0 - std::exp(-ct) * (1.0 + ct);
  dens.normalize(target);
  fm.add(dens);
  return Measure::mixture(std::move(fm));
}

}  // namespace

Measure weak_poisson_dist(const WeaklyStableLaw& law, double c, double t, std::size_t k_max) {
  if (!(c > 0.0) || !(t >= 0.0)) throw argument_error("weak_poisson_dist: need c > 0, t >= 0");
  const double ct = c * t;
  if (ct == 0.0) return Measure::dirac(0.0);
  switch (law.kind()) {
    case WeakKind::SymmetricStable: {
      std::vector<Atom> atoms;
      double total = 0.0;
      for (std::size_t k = 0; k <= k_max; ++k) {
        const double w = std::exp(log_poisson_weight(ct, k));
        atoms.push_back({std::pow(static_cast<double>(k), 1.0 / law.p()), w});
        total += w;
      }
      for (Atom& a : atoms) a.weight /= total;
      return Measure::dirac_mix(std::move(atoms));
    }
    case WeakKind::KendallMu:
      return kendall_mu_poisson(law.alpha(), ct, k_max);
    case WeakKind::SphereUniform:
      if (law.n() != 3) {
        throw unsupported_error("sphere unit-jump closed form is built for n = 3 only");
      }
      return sphere3_poisson(ct, k_max);
    case WeakKind::TwoPoint:
      throw unsupported_error("no closed unit-jump law for the two-point generator here");
  }
  throw argument_error("unreachable law kind");
}

WeakPoissonPath weak_additive_path(const WeakRandomMeasureSpec& spec,
                                   const std::vector<double>& grid, RngStream& rng) {
  if (grid.empty()) throw argument_error("weak path: empty grid");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i] < grid[i + 1])) throw argument_error("weak path: grid must increase");
  }
  const RepresentablePair pair = representable_pair(spec.law);
  WeakPoissonPath path;
  path.times = grid;
  path.S.resize(grid.size());
  path.Y.resize(grid.size());
  double s = 0.0;
  std::vector<double> state = mu_sample(spec.law, rng);
  path.S[0] = 0.0;
  path.Y[0] = std::vector<double>(spec.law.dim(), 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double rho = spec.control.mass(grid[i - 1], grid[i]);
    if (spec.base.is_stable()) {
      const double p = spec.law.kappa() * spec.base.beta();
      const double inc = std::pow(rho, 1.0 / p) *
                         std::pow(one_sided_stable(spec.base.beta(), rng), 1.0 / spec.law.kappa());
      const std::vector<double> x = mu_sample(spec.law, rng);
      if (s == 0.0) {
        s = inc;
        state = x;
      } else {
        const double s_next = pair.theta(s, state, inc, x);
        state = pair.chi(s, state, inc, x);
        s = s_next;
      }
    } else {
      const std::uint64_t n = rng.poisson(rho * spec.base.intensity());
      for (std::uint64_t k = 0; k < n; ++k) {
        const std::vector<double> x = mu_sample(spec.law, rng);
        if (s == 0.0) {
          s = spec.base.atom();
          state = x;
        } else {
          const double s_next = pair.theta(s, state, spec.base.atom(), x);
          state = pair.chi(s, state, spec.base.atom(), x);
          s = s_next;
        }
      }
    }
    path.S[i] = s;
    std::vector<double> y(state.size());
    for (std::size_t d = 0; d < state.size(); ++d) y[d] = s * state[d];
    path.Y[i] = std::move(y);
  }
  return path;
}

WeakPoissonPath weak_poisson_path(const WeaklyStableLaw& law, double c,
                                  const std::vector<double>& grid, RngStream& rng) {
  WeakRandomMeasureSpec spec(law, WeakJumpBase::compound_poisson(c), ControlMeasure::lebesgue(1.0));
  return weak_additive_path(spec, grid, rng);
}

// -- uniform convolution powers ------------------------------------------------

namespace {

double uniform_power_closed(std::size_t n, double x) {
  const double nn = static_cast<double>(n);
  if (std::abs(x) >= nn) return 0.0;
  // the sum keeps the pieces below x, so the cancellation is mildest on the
  // left half; the density is even, evaluate there
  x = -std::abs(x);
  const std::size_t k = static_cast<std::size_t>(std::floor(0.5 * (x + nn)));
  std::vector<double> terms;
  terms.reserve(k + 1);
  double log_binom = 0.0;  // log C(n, 0)
  for (std::size_t i = 0; i <= k; ++i) {
    const double base = x + nn - 2.0 * static_cast<double>(i);
    const double mag = std::exp(log_binom + (nn - 1.0) * std::log(base) -
                                std::lgamma(nn) - nn * std::log(2.0));
    terms.push_back((i % 2 == 0 ? 1.0 : -1.0) * mag);
    log_binom += std::log(nn - static_cast<double>(i)) - std::log(static_cast<double>(i) + 1.0);
  }
  const double v = num::pairwise_sum(terms);
  return v > 0.0 ? v : 0.0;
}

struct UniformPowerTable {
  double dx = 0.0;
  std::vector<double> cdf;  // cumulative on [-n, n]
  double value(std::size_t n, double x) const {
    const double nn = static_cast<double>(n);
    if (std::abs(x) >= nn) return 0.0;
    // derivative of the cumulative, centered
    const double pos = (x + nn) / dx;
    const std::size_t i = std::min(static_cast<std::size_t>(pos), cdf.size() - 2);
    return (cdf[i + 1] - cdf[i]) / dx;
  }
};

const UniformPowerTable& uniform_power_table(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, UniformPowerTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  // self-convolution step: f^(m)(x) = (F^(m-1)(x+1) - F^(m-1)(x-1)) / 2,
  // iterated from the largest closed form
  const double dx = 1.0 / 64.0;
  std::size_t m = 30;
  const std::size_t cells_per_unit = 64;
  auto tabulate_cdf = [&](const std::vector<double>& f, std::size_t mm) {
    std::vector<double> cdf(f.size());
    double acc = 0.0;
    cdf[0] = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) {
      acc += 0.5 * (f[i] + f[i - 1]) * dx;
      cdf[i] = acc;
    }
    (void)mm;
    return cdf;
  };
  std::vector<double> f(2 * m * cells_per_unit + 1);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = uniform_power_closed(m, -static_cast<double>(m) + static_cast<double>(i) * dx);
  }
  std::vector<double> cdf = tabulate_cdf(f, m);
  while (m < n) {
    ++m;
    std::vector<double> next(2 * m * cells_per_unit + 1);
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double x = -static_cast<double>(m) + static_cast<double>(i) * dx;
      auto prev_cdf = [&](double u) {
        const double lo = -static_cast<double>(m - 1);
        if (u <= lo) return 0.0;
        if (u >= static_cast<double>(m - 1)) return cdf.back();
        const double pos = (u - lo) / dx;
        const std::size_t j = std::min(static_cast<std::size_t>(pos), cdf.size() - 2);
        const double w = pos - static_cast<double>(j);
        return cdf[j] + w * (cdf[j + 1] - cdf[j]);
      };
      next[i] = 0.5 * (prev_cdf(x + 1.0) - prev_cdf(x - 1.0));
    }
    cdf = tabulate_cdf(next, m);
    f = std::move(next);
  }
  UniformPowerTable table;
  table.dx = dx;
  table.cdf = tabulate_cdf(f, n);
  return cache.emplace(n, std::move(table)).first->second;
}

}  // namespace

double uniform_conv_power_density(std::size_t n, double x) {
  if (n < 1) throw argument_error("uniform_conv_power_density: n >= 1");
  if (n <= 30) return uniform_power_closed(n, x);
  return uniform_power_table(n).value(n, x);
}

// -- subordination equivalence ---------------------------------------------------

SubordinationReport subordination_check(double alpha, double beta,
                                        const std::vector<double>& grid, std::size_t n,
                                        const RngStream& base) {
  if (!(alpha > 0.0) || !(alpha <= 2.0)) throw argument_error("subordination: alpha in (0,2]");
  if (!(beta > 0.0) || !(beta < 1.0)) throw argument_error("subordination: beta in (0,1)");
  WeakRandomMeasureSpec spec(WeaklyStableLaw::symmetric_stable(alpha), WeakJumpBase::stable(beta),
                             ControlMeasure::lebesgue(1.0));
  std::vector<double> associated = par::draw_batch(n, base.child(1), [&](RngStream& rng) {
    const WeakPoissonPath path = weak_additive_path(spec, grid, rng);
    return path.Y.back()[0];
  });
  std::vector<double> direct = par::draw_batch(n, base.child(2), [&](RngStream& rng) {
    return std::pow(grid.back(), 1.0 / (alpha * beta)) * symmetric_stable(alpha * beta, rng);
  });
  SubordinationReport report;
  report.samples = n;
  report.ks = ks_distance(associated, direct);
  return report;
}

}  // namespace gconv
