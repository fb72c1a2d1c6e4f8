#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gconv::num {

/// Composite trapezoid over tabulated (x, y); x sorted ascending.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

/// Nodes and weights for tanh-sinh (double-exponential) quadrature on (-1, 1).
/// Tolerates integrable endpoint singularities.
struct DeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  explicit DeRule(double h = 1.0 / 32.0);
};

/// ∫_a^b g via tanh-sinh; endpoints never evaluated.
double integrate_de(const std::function<double(double)>& g, double a, double b);

/// ∫_a^b g via composite 128-point Gauss-Legendre on `panels` subintervals.
double integrate_gl(const std::function<double(double)>& g, double a, double b,
                    std::size_t panels = 1);

/// Pairwise (cascade) summation.
double pairwise_sum(const std::vector<double>& v);

/// (1 - sin t / t), series near zero.
double one_minus_sinc(double t);
double sinc(double t);

/// Geometric grid from a to b inclusive (a, b > 0), n points.
std::vector<double> log_grid(double a, double b, std::size_t n);
/// Uniform grid from a to b inclusive, n points.
std::vector<double> linear_grid(double a, double b, std::size_t n);

/// Sorted union of two ascending grids, duplicates (within rel 1e-12) merged.
std::vector<double> merge_grids(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace gconv::num
