#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gconv {

/// One verification check outcome. Multi-part checks report the worst
/// part as statistic = max(value_i / threshold_i) against threshold 1.
struct VerifyResult {
  std::string test;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string note;
};

/// Suite names: kernels, stable, cpoisson, processes, weak, integral,
/// acceptance (the release gate), all.
std::vector<std::string> verify_suites();

/// Run a suite. Checks run on independent derived streams (in parallel when
/// enabled) and results are merged in name order, so the report bytes depend
/// only on (suite, seed).
std::vector<VerifyResult> run_verify(const std::string& suite, std::uint64_t seed,
                                     bool parallel = true);

}  // namespace gconv
