#pragma once

#include <stdexcept>
#include <string>

namespace hsap {

/// Malformed or out-of-contract input data (bad file bytes, ragged CSV,
/// zero vectors under the cosine metric, oversized secant requests).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical invariant failed at run time (lost orthonormality,
/// divergent decomposition).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hsap
