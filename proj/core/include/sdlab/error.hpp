#pragma once

#include <stdexcept>
#include <string>

namespace sdlab {

/// Bad input: out-of-range parameters, malformed specs, violated preconditions.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// The fixed-point / extended-precision pipeline cannot resolve the requested
/// quantity (q·β error or threshold below the working resolution).
class PrecisionError : public std::runtime_error {
 public:
  explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

}  // namespace sdlab
