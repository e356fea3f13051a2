#pragma once

#include <vector>

namespace pbit {

// Nodes and weights for integration against exp(-x^2); weights sum to
// sqrt(pi). Rules are cached per node count and safe to request
// concurrently.
struct GaussHermiteRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;
};

const GaussHermiteRule& gauss_hermite_rule(int n);

}  // namespace pbit
