#pragma once

#include <stdexcept>
#include <string>

namespace hlz {

/// A configured resource limit (height budget, sieve budget) would be exceeded.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to produce a result (bracket failure,
/// iteration cap, no witness found).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pointwise check was requested too close to a zero of Z.
class ProximityError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace hlz

namespace hlz {

/// A checkpoint file does not match the current configuration or is corrupt.
class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hlz
