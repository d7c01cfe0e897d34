#pragma once

#include <stdexcept>
#include <string>

namespace kinanneal {

// Invalid user-facing configuration (bad method name, malformed schedule,
// unwritable output directory). The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical fault detected at runtime (non-finite objective, unresolved
// kernel, loss of positivity).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kinanneal
