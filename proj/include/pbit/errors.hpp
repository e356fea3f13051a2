#pragma once

#include <stdexcept>
#include <string>

namespace pbit {

// Malformed or degenerate input: parse failures, index/dimension mismatches,
// violated size guards. CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: solver non-convergence, quadrature cap exceeded.
// CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pbit
