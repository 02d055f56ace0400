#pragma once

#include <stdexcept>
#include <string>

namespace mif {

/// Input outside an operation's domain: evaluation at a pole, an excluded
/// Cayley point, a malformed dataset.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A constant specification that cannot determine the limit at infinity
/// (p = 1, or l = 1 which signals a point mass at infinity).
class IllPosedError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A numerical procedure did not produce a result it should have produced
/// for valid data (missing sign change, incomplete eigenvalue scan, ...).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Data that contradicts itself: a recovered zero outside its gap, broken
/// interlacing after reconstruction.
class InconsistentDataError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace mif
