#pragma once

#include <string>

namespace sdlab {

/// Decimal string with 18 significant digits ("%.18Lg"); the artifact format for reals.
std::string decimal18(long double x);

}  // namespace sdlab
