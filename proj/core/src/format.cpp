#include "sdlab/format.hpp"

#include <cstdio>

namespace sdlab {

std::string decimal18(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.18Lg", x);
  return buf;
}

}  // namespace sdlab
