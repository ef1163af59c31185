#pragma once

#include <stdexcept>
#include <string>

namespace logdim {

/// Bad user input: unreadable files, malformed tokens, invalid parameters.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric routine could not produce a meaningful result (degenerate fits,
/// solver failures, out-of-range estimates).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace logdim
