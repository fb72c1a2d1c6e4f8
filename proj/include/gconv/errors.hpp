#pragma once

#include <stdexcept>
#include <string>

namespace gconv {

/// Invalid argument (bad parameter range, malformed input).
class argument_error : public std::invalid_argument {
 public:
  explicit argument_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A representation or parameter combination this build does not support.
/// The message tells the caller which fallback applies.
class unsupported_error : public std::runtime_error {
 public:
  explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (divergent integral estimate, non-finite result) with diagnostics.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gconv
