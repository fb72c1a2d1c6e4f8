#include "gconv/stats.hpp"

#include <algorithm>
#include <cmath>

#include "gconv/errors.hpp"
#include "gconv/numeric.hpp"

namespace gconv {

double ks_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw argument_error("ks_distance: empty sample");
  std::vector<double> sa(a), sb(b);
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_distance_cdf(const std::vector<double>& samples,
                       const std::function<double(double)>& cdf,
                       const std::vector<double>& jump_points) {
  if (samples.empty()) throw argument_error("ks_distance_cdf: empty sample");
  std::vector<double> s(samples);
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  // compare one-sided limits per distinct value, so atoms of F matched by
  // tied samples are handled correctly
  std::size_t i = 0;
  while (i < s.size()) {
    const double x = s[i];
    std::size_t j = i;
    while (j < s.size() && s[j] == x) ++j;
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(j) / n;
    d = std::max(d, std::abs(cdf(x) - hi));
    const double eps = 1e-9 * std::max(1.0, std::abs(x));
    d = std::max(d, std::abs(cdf(x - eps) - lo));
    i = j;
  }
  for (double x : jump_points) {
    const double ecdf =
        static_cast<double>(std::upper_bound(s.begin(), s.end(), x) - s.begin()) / n;
    const double ecdf_left =
        static_cast<double>(std::lower_bound(s.begin(), s.end(), x) - s.begin()) / n;
    d = std::max(d, std::abs(cdf(x) - ecdf));
    const double eps = 1e-9 * std::max(1.0, std::abs(x));
    d = std::max(d, std::abs(cdf(x - eps) - ecdf_left));
  }
  return d;
}

std::complex<double> empirical_cf(const std::vector<double>& samples, double t) {
  if (samples.empty()) throw argument_error("empirical_cf: empty sample");
  std::vector<double> re(samples.size()), im(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    re[i] = std::cos(t * samples[i]);
    im[i] = std::sin(t * samples[i]);
  }
  const double n = static_cast<double>(samples.size());
  return {num::pairwise_sum(re) / n, num::pairwise_sum(im) / n};
}

MeanStderr mean_stderr(const std::vector<double>& values) {
  if (values.empty()) throw argument_error("mean_stderr: empty sample");
  const double n = static_cast<double>(values.size());
  const double mean = num::pairwise_sum(values) / n;
  if (values.size() == 1) return {mean, 0.0};
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean;
    sq[i] = d * d;
  }
  const double var = num::pairwise_sum(sq) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

MeanStderr empirical_cos_cf(const std::vector<double>& samples, double t) {
  std::vector<double> c(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) c[i] = std::cos(t * samples[i]);
  return mean_stderr(c);
}

void merge_common_atoms(std::vector<double>& a, std::vector<double>& b) {
  std::vector<double> all;
  all.reserve(a.size() + b.size());
  all.insert(all.end(), a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  std::vector<double> reps;
  reps.reserve(all.size());
  for (double v : all) {
    if (reps.empty() || v - reps.back() > 1e-11 * std::max(1.0, std::abs(v))) reps.push_back(v);
  }
  auto snap = [&reps](double v) {
    auto it = std::lower_bound(reps.begin(), reps.end(), v);
    if (it == reps.end()) return reps.back();
    if (it == reps.begin()) return reps.front();
    return (*it - v < v - *(it - 1)) ? *it : *(it - 1);
  };
  for (double& v : a) v = snap(v);
  for (double& v : b) v = snap(v);
}

double hill_tail_index(std::vector<double> samples, std::size_t k) {
  samples.erase(std::remove_if(samples.begin(), samples.end(), [](double v) { return !(v > 0.0); }),
                samples.end());
  if (k < 2 || samples.size() <= k) throw argument_error("hill_tail_index: need 2 <= k < #positive");
  std::sort(samples.begin(), samples.end(), std::greater<>());
  double acc = 0.0;
  const double x_k = samples[k];
  for (std::size_t i = 0; i < k; ++i) acc += std::log(samples[i] / x_k);
  return static_cast<double>(k) / acc;
}

}  // namespace gconv
