#include "gconv/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "gconv/errors.hpp"
#include "gconv/numeric.hpp"
#include "gconv/parallel.hpp"

namespace gconv {

namespace {

void check_grid(const std::vector<double>& grid, const std::vector<double>& values) {
  if (grid.size() != values.size()) throw argument_error("density grid/value size mismatch");
  if (grid.size() < 2) throw argument_error("density grid needs at least 2 points");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i] < grid[i + 1])) throw argument_error("density grid must be strictly increasing");
  }
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw argument_error("density values must be >= 0 and finite");
  }
}

}  // namespace

FiniteMeasure FiniteMeasure::point_mass(double x, double w) {
  FiniteMeasure m;
  m.add_atom(x, w);
  return m;
}

FiniteMeasure FiniteMeasure::from_atoms(std::vector<Atom> atoms) {
  FiniteMeasure m;
  for (const Atom& a : atoms) m.add_atom(a.point, a.weight);
  return m;
}

FiniteMeasure FiniteMeasure::from_density(std::vector<double> grid, std::vector<double> values,
                                          double tail_mass) {
  FiniteMeasure m;
  m.add_density(grid, values, 1.0, tail_mass);
  return m;
}

FiniteMeasure& FiniteMeasure::add_atom(double x, double w) {
  if (!(w >= 0.0) || !std::isfinite(w) || !std::isfinite(x)) {
    throw argument_error("atom weight must be finite and >= 0");
  }
  if (w > 0.0) atoms_.push_back({x, w});
  return *this;
}

FiniteMeasure& FiniteMeasure::add_density(const std::vector<double>& grid,
                                          const std::vector<double>& values, double weight,
                                          double tail_mass) {
  check_grid(grid, values);
  if (!(weight >= 0.0) || !(tail_mass >= 0.0)) throw argument_error("negative density weight");
  if (weight == 0.0 && tail_mass == 0.0) return *this;
  if (grid_.empty()) {
    grid_ = grid;
    density_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) density_[i] = weight * values[i];
    tail_mass_ += weight * tail_mass;
    return *this;
  }
  // merge onto the union grid; both components interpolated linearly (zero
  // outside their own support). A support edge with nonzero density is a
  // jump the union representation cannot carry, so a zero knot is pinned
  // just outside each such edge.
  std::vector<double> merged = num::merge_grids(grid_, grid);
  auto edge_knots = [&merged](const std::vector<double>& gx, const std::vector<double>& gy) {
    std::vector<double> knots;
    const double d_lo = 1e-9 * std::max(1.0, std::abs(gx.front()));
    const double d_hi = 1e-9 * std::max(1.0, std::abs(gx.back()));
    if (gy.front() > 0.0 && gx.front() - d_lo > merged.front()) knots.push_back(gx.front() - d_lo);
    if (gy.back() > 0.0 && gx.back() + d_hi < merged.back()) knots.push_back(gx.back() + d_hi);
    return knots;
  };
  merged = num::merge_grids(merged, edge_knots(grid_, density_));
  merged = num::merge_grids(merged, edge_knots(grid, values));
  std::vector<double> dens(merged.size(), 0.0);
  auto interp = [](const std::vector<double>& gx, const std::vector<double>& gy, double x) {
    if (x < gx.front() || x > gx.back()) return 0.0;
    auto it = std::upper_bound(gx.begin(), gx.end(), x);
    if (it == gx.begin()) return gy.front();
    if (it == gx.end()) return gy.back();
    const std::size_t hi = static_cast<std::size_t>(it - gx.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - gx[lo]) / (gx[hi] - gx[lo]);
    return gy[lo] + t * (gy[hi] - gy[lo]);
  };
  for (std::size_t i = 0; i < merged.size(); ++i) {
    dens[i] = interp(grid_, density_, merged[i]) + weight * interp(grid, values, merged[i]);
  }
  grid_ = std::move(merged);
  density_ = std::move(dens);
  tail_mass_ += weight * tail_mass;
  return *this;
}

FiniteMeasure& FiniteMeasure::add(const FiniteMeasure& other, double weight) {
  for (const Atom& a : other.atoms_) add_atom(a.point, weight * a.weight);
  if (!other.grid_.empty()) add_density(other.grid_, other.density_, weight, 0.0);
  tail_mass_ += weight * other.tail_mass_;
  return *this;
}

double FiniteMeasure::atom_mass() const {
  std::vector<double> w(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) w[i] = atoms_[i].weight;
  return num::pairwise_sum(w);
}

double FiniteMeasure::density_mass() const {
  return (grid_.empty() ? 0.0 : num::trapezoid(grid_, density_)) + tail_mass_;
}

double FiniteMeasure::integrate(const std::function<double(double)>& g) const {
  std::vector<double> parts;
  parts.reserve(atoms_.size() + (grid_.empty() ? 0 : grid_.size()) + 1);
  for (const Atom& a : atoms_) parts.push_back(a.weight * g(a.point));
  if (!grid_.empty()) {
    std::vector<double> y(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) y[i] = density_[i] * g(grid_[i]);
    parts.push_back(num::trapezoid(grid_, y));
    if (tail_mass_ > 0.0) parts.push_back(tail_mass_ * g(grid_.back()));
  } else if (tail_mass_ > 0.0) {
    throw numeric_error("finite measure has tail mass but no grid");
  }
  return num::pairwise_sum(parts);
}

double FiniteMeasure::mass_below(double x) const {
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (a.point <= x) total += a.weight;
  }
  if (!grid_.empty()) {
    if (x >= grid_.back()) {
      total += num::trapezoid(grid_, density_) + tail_mass_;
    } else if (x > grid_.front()) {
      auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
      const std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
      std::vector<double> gx(grid_.begin(), grid_.begin() + hi);
      std::vector<double> gy(density_.begin(), density_.begin() + hi);
      // partial cell up to x with interpolated density
      const double x0 = grid_[hi - 1], x1 = grid_[hi];
      const double f0 = density_[hi - 1], f1 = density_[hi];
      const double fx = f0 + (f1 - f0) * (x - x0) / (x1 - x0);
      gx.push_back(x);
      gy.push_back(fx);
      total += num::trapezoid(gx, gy);
    }
  }
  return total;
}

FiniteMeasure FiniteMeasure::scaled_by(double c) const {
  if (!(c > 0.0)) throw argument_error("scaled_by: factor must be > 0");
  FiniteMeasure out;
  for (const Atom& a : atoms_) out.add_atom(c * a.point, a.weight);
  if (!grid_.empty()) {
    std::vector<double> g(grid_.size()), d(density_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      g[i] = c * grid_[i];
      d[i] = density_[i] / c;
    }
    out.add_density(g, d, 1.0, tail_mass_);
  }
  return out;
}

FiniteMeasure FiniteMeasure::times(double w) const {
  FiniteMeasure out;
  out.add(*this, w);
  return out;
}

FiniteMeasure FiniteMeasure::abs_pushforward() const {
  FiniteMeasure out;
  for (const Atom& a : atoms_) out.add_atom(std::abs(a.point), a.weight);
  out.tidy_atoms();
  if (!grid_.empty()) {
    if (grid_.front() >= 0.0) {
      out.add_density(grid_, density_, 1.0, tail_mass_);
    } else if (grid_.back() <= 0.0) {
      std::vector<double> g(grid_.rbegin(), grid_.rend());
      std::vector<double> d(density_.rbegin(), density_.rend());
      for (double& v : g) v = -v;
      out.add_density(g, d, 1.0, tail_mass_);
    } else {
      throw unsupported_error("abs_pushforward: density grid straddles 0; split it first");
    }
  }
  return out;
}

void FiniteMeasure::normalize(double target) {
  const double total = total_mass();
  if (!(total > 0.0)) throw numeric_error("cannot normalize a zero measure");
  const double c = target / total;
  for (Atom& a : atoms_) a.weight *= c;
  for (double& v : density_) v *= c;
  tail_mass_ *= c;
}

void FiniteMeasure::tidy_atoms() {
  std::map<double, double> acc;
  for (const Atom& a : atoms_) acc[a.point] += a.weight;
  atoms_.clear();
  for (const auto& [x, w] : acc) {
    if (w > 0.0) atoms_.push_back({x, w});
  }
}

// ---------------------------------------------------------------------------

Measure Measure::dirac(double x) { return dirac_mix({{x, 1.0}}); }

Measure Measure::dirac_mix(std::vector<Atom> atoms) {
  if (atoms.empty()) throw argument_error("dirac_mix: no atoms");
  FiniteMeasure fm = FiniteMeasure::from_atoms(std::move(atoms));
  fm.tidy_atoms();
  const double total = fm.total_mass();
  if (std::abs(total - 1.0) > 1e-12) {
    throw argument_error("dirac_mix: weights sum to " + format_double(total) + ", expected 1");
  }
  fm.normalize();
  Measure m;
  m.kind_ = MeasureKind::DiracMix;
  m.fm_ = std::move(fm);
  return m;
}

Measure Measure::grid_density(std::vector<double> grid, std::vector<double> values,
                              double tail_mass) {
  FiniteMeasure fm = FiniteMeasure::from_density(std::move(grid), std::move(values), tail_mass);
  const double total = fm.total_mass();
  if (std::abs(total - 1.0) > 1e-6) {
    throw argument_error("grid_density: mass " + format_double(total) + " is not within 1e-6 of 1");
  }
  fm.normalize();
  Measure m;
  m.kind_ = MeasureKind::GridDensity;
  m.fm_ = std::move(fm);
  return m;
}

Measure Measure::grid_density_normalized(std::vector<double> grid, std::vector<double> values,
                                         double tail_mass) {
  FiniteMeasure fm = FiniteMeasure::from_density(std::move(grid), std::move(values), tail_mass);
  fm.normalize();
  Measure m;
  m.kind_ = MeasureKind::GridDensity;
  m.fm_ = std::move(fm);
  return m;
}

Measure Measure::mixture(FiniteMeasure components) {
  const double total = components.total_mass();
  if (std::abs(total - 1.0) > 1e-6) {
    throw argument_error("mixture: mass " + format_double(total) + " is not within 1e-6 of 1");
  }
  components.normalize();
  components.tidy_atoms();
  Measure m;
  if (components.grid().empty() && components.tail_mass() == 0.0) {
    m.kind_ = MeasureKind::DiracMix;
  } else if (components.atoms().empty()) {
    m.kind_ = MeasureKind::GridDensity;
  } else {
    m.kind_ = MeasureKind::Mixture;
  }
  m.fm_ = std::move(components);
  return m;
}

Measure Measure::sampler_backed(Sampler s, std::string label) {
  if (!s) throw argument_error("sampler_backed: empty sampler");
  Measure m;
  m.kind_ = MeasureKind::SamplerBacked;
  m.sampler_ = std::move(s);
  m.label_ = std::move(label);
  return m;
}

Measure Measure::empirical(std::vector<double> samples) {
  if (samples.empty()) throw argument_error("empirical: need at least one sample");
  Measure m;
  m.kind_ = MeasureKind::Empirical;
  m.samples_ = std::move(samples);
  return m;
}

const FiniteMeasure& Measure::components() const {
  if (!closed_form()) throw unsupported_error("measure has no closed-form components");
  return fm_;
}

const std::vector<double>& Measure::samples() const {
  if (kind_ != MeasureKind::Empirical) throw unsupported_error("measure is not empirical");
  return samples_;
}

double Measure::cdf(double x) const {
  if (closed_form()) return std::min(fm_.mass_below(x), 1.0);
  if (kind_ == MeasureKind::Empirical) {
    double count = 0;
    for (double v : samples_) {
      if (v <= x) ++count;
    }
    return count / static_cast<double>(samples_.size());
  }
  throw unsupported_error("cdf: sampler-backed measure; materialize an empirical first");
}

namespace {

// inverse of the piecewise-quadratic CDF of a piecewise-linear density cell
double invert_cell(double x0, double x1, double f0, double f1, double v) {
  const double h = x1 - x0;
  const double cell_mass = 0.5 * (f0 + f1) * h;
  if (cell_mass <= 0.0) return x0;
  v = std::min(std::max(v, 0.0), cell_mass);
  const double slope = (f1 - f0) / h;
  if (std::abs(slope) * h < 1e-14 * std::max(f0, f1)) {
    return x0 + v / std::max(f0, 1e-300);
  }
  // solve f0*u + slope*u^2/2 = v for u in [0,h]
  const double disc = f0 * f0 + 2.0 * slope * v;
  const double root = std::sqrt(std::max(disc, 0.0));
  const double u = (slope > 0.0) ? (root - f0) / slope : (f0 - root) / (-slope);
  return x0 + std::min(std::max(u, 0.0), h);
}

}  // namespace

double Measure::sample(RngStream& rng) const {
  switch (kind_) {
    case MeasureKind::SamplerBacked:
      return sampler_(rng);
    case MeasureKind::Empirical: {
      const std::size_t i =
          static_cast<std::size_t>(rng.uniform() * static_cast<double>(samples_.size()));
      return samples_[std::min(i, samples_.size() - 1)];
    }
    default:
      break;
  }
  double u = rng.uniform();
  for (const Atom& a : fm_.atoms()) {
    if (u < a.weight) return a.point;
    u -= a.weight;
  }
  // density part: walk cells; truncated tail mapped to the grid end
  const auto& grid = fm_.grid();
  const auto& dens = fm_.density();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double cell = 0.5 * (dens[i] + dens[i + 1]) * (grid[i + 1] - grid[i]);
    if (u < cell) return invert_cell(grid[i], grid[i + 1], dens[i], dens[i + 1], u);
    u -= cell;
  }
  return grid.empty() ? fm_.atoms().back().point : grid.back();
}

std::vector<double> Measure::sample_n(std::size_t n, const RngStream& base) const {
  return par::draw_batch(n, base, [this](RngStream& r) { return sample(r); });
}

bool Measure::nonnegative_support() const {
  if (kind_ == MeasureKind::Empirical) {
    return std::all_of(samples_.begin(), samples_.end(), [](double v) { return v >= 0.0; });
  }
  if (!closed_form()) return true;  // sampler contract is the caller's
  for (const Atom& a : fm_.atoms()) {
    if (a.point < 0.0) return false;
  }
  return fm_.grid().empty() || fm_.grid().front() >= 0.0;
}

double quadrature(const Measure& m, const std::function<double(double)>& g) {
  switch (m.kind()) {
    case MeasureKind::SamplerBacked:
      throw unsupported_error("quadrature: sampler-backed measure; materialize an empirical first");
    case MeasureKind::Empirical: {
      const auto& s = m.samples();
      std::vector<double> v(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) v[i] = g(s[i]);
      return num::pairwise_sum(v) / static_cast<double>(s.size());
    }
    default:
      return m.components().integrate(g);
  }
}

Measure materialize(const Measure& m, std::size_t n, const RngStream& base) {
  return Measure::empirical(m.sample_n(n, base));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// --- CSV ---------------------------------------------------------------

void Measure::write_csv(std::ostream& os) const {
  switch (kind_) {
    case MeasureKind::DiracMix:
      os << "point,weight\n";
      for (const Atom& a : fm_.atoms()) {
        os << format_double(a.point) << "," << format_double(a.weight) << "\n";
      }
      return;
    case MeasureKind::GridDensity:
      os << "x,density\n";
      for (std::size_t i = 0; i < fm_.grid().size(); ++i) {
        os << format_double(fm_.grid()[i]) << "," << format_double(fm_.density()[i]) << "\n";
      }
      return;
    case MeasureKind::Mixture:
      os << "kind,x,value\n";
      for (const Atom& a : fm_.atoms()) {
        os << "atom," << format_double(a.point) << "," << format_double(a.weight) << "\n";
      }
      for (std::size_t i = 0; i < fm_.grid().size(); ++i) {
        os << "density," << format_double(fm_.grid()[i]) << "," << format_double(fm_.density()[i])
           << "\n";
      }
      return;
    case MeasureKind::Empirical:
      os << "x\n";
      for (double v : samples_) os << format_double(v) << "\n";
      return;
    case MeasureKind::SamplerBacked:
      throw unsupported_error("cannot serialize a sampler-backed measure");
  }
}

Measure Measure::read_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw argument_error("read_csv: empty input");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  auto parse_rest = [&is](std::size_t fields) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<double> row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
      if (row.size() != fields) throw argument_error("read_csv: bad field count in '" + line + "'");
      rows.push_back(std::move(row));
    }
    return rows;
  };
  if (header == "x") {
    std::vector<double> xs;
    for (const auto& r : parse_rest(1)) xs.push_back(r[0]);
    return empirical(std::move(xs));
  }
  if (header == "point,weight") {
    std::vector<Atom> atoms;
    for (const auto& r : parse_rest(2)) atoms.push_back({r[0], r[1]});
    return dirac_mix(std::move(atoms));
  }
  if (header == "x,density") {
    std::vector<double> g, d;
    for (const auto& r : parse_rest(2)) {
      g.push_back(r[0]);
      d.push_back(r[1]);
    }
    return grid_density(std::move(g), std::move(d));
  }
  throw argument_error("read_csv: unrecognized header '" + header + "'");
}

}  // namespace gconv
