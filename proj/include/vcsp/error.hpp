#pragma once

#include <stdexcept>
#include <string>

namespace vcsp {

/// Malformed input: bad arity, out-of-range label, parse failure, violated precondition.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration or LP size budget was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vcsp
