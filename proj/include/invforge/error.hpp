#pragma once

#include <stdexcept>
#include <string>

namespace invforge {

/// Malformed documents, dimension mismatches and violated type invariants.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A valid request the component does not support (e.g. an oracle/domain
/// pair that has no exact decision procedure).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exhaustive search would exceed its configured enumeration cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace invforge
