#include "gconv/parallel.hpp"

#include <cstdlib>

namespace gconv::par {

bool parallel_enabled() {
#ifdef _OPENMP
  static const bool disabled = [] {
    const char* v = std::getenv("GCONV_SERIAL");
    return v != nullptr && v[0] != '\0' && v[0] != '0';
  }();
  return !disabled;
#else
  return false;
#endif
}

}  // namespace gconv::par
