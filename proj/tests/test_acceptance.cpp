// Release gate: every criterion of the statistical acceptance suite runs at
// its pinned tolerance and prints one pass/fail line.

#include <doctest.h>

#include <cstdio>

#include "gconv/verify.hpp"

TEST_CASE("acceptance criteria") {
  const auto results = gconv::run_verify("acceptance", 7);
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] %-28s statistic=%-14.6g threshold=%-8g  %s\n",
                r.pass ? "PASS" : "FAIL", r.test.c_str(), r.statistic, r.threshold,
                r.note.c_str());
    all = all && r.pass;
    CHECK_MESSAGE(r.pass, r.test, ": ", r.note);
  }
  CHECK(all);
  CHECK(results.size() == 10);
}
