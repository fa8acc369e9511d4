#pragma once

#include <stdexcept>
#include <string>

namespace clawham {

/// Malformed input: unknown vertex, bad token, bad spec document.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural hypothesis of the construction does not hold for the graph
/// at hand (claw found, paw without common neighbour, no ray, ...).
class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured search radius or size cap was hit.
class ResourceCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant or a case the construction rules out occurred.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace clawham
