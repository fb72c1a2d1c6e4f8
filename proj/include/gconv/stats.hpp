#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace gconv {

/// Two-sample Kolmogorov-Smirnov statistic, in [0,1]. Inputs need not be sorted.
double ks_distance(const std::vector<double>& a, const std::vector<double>& b);

/// One-sample KS statistic of `samples` against a CDF. `jump_points` lets
/// callers add the discontinuity locations of F so the sup is taken there too.
double ks_distance_cdf(const std::vector<double>& samples,
                       const std::function<double(double)>& cdf,
                       const std::vector<double>& jump_points = {});

/// (1/n) sum exp(i t x_j).
std::complex<double> empirical_cf(const std::vector<double>& samples, double t);

/// Mean of cos(t x_j) with its standard error (symmetric-law cf estimate).
struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};
MeanStderr empirical_cos_cf(const std::vector<double>& samples, double t);
MeanStderr mean_stderr(const std::vector<double>& values);

/// Hill estimator of the tail index from the k largest positive samples
/// (diagnostic; heavier tails give smaller values).
double hill_tail_index(std::vector<double> samples, std::size_t k);

/// Snap values of the two samples that agree to ~1e-11 relative onto shared
/// representatives. Distribution identities computed along two algebraically
/// equal routes can land the same atom a few ulps apart, which a KS distance
/// would read as total separation; merging first compares the laws, not the
/// rounding. Values of genuinely continuous laws are perturbed by at most
/// the tolerance.
void merge_common_atoms(std::vector<double>& a, std::vector<double>& b);

}  // namespace gconv
