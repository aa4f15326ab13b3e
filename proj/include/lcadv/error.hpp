#pragma once

#include <stdexcept>
#include <string>

namespace lcadv {

// Bad user input: malformed files, unknown labels, records violating a
// manifest. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numeric precondition does not hold: out-of-domain interpolation,
// non-invertible curve, empty comparison interval.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lcadv
