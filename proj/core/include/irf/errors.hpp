#pragma once

#include <stdexcept>
#include <string>

namespace irf {

/// A point was evaluated or supplied outside the open domain of a target.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine produced non-finite values or failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The integrated rate along an unbounded ray never reached the threshold;
/// the target is not normalizable in that direction.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace irf
