#include "pbit/coupling.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "pbit/errors.hpp"

namespace pbit {

std::pair<double, double> CouplingMatrix::i0_endpoints() const {
  if (!(s_j > 0.0)) {
    throw DataError("I0 endpoints undefined: field scale s_J is zero (no couplings)");
  }
  return {i0_min, i0_max};
}

double field_scale(const SpMat& J) {
  const auto n = J.rows();
  if (n < 2) throw DataError("field_scale: degenerate instance (N < 2)");
  const double inv_n = 1.0 / static_cast<double>(n);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double sum = 0.0, sum_sq = 0.0;
    for (SpMat::InnerIterator it(J, i); it; ++it) {
      sum += it.value();
      sum_sq += it.value() * it.value();
    }
    // population variance over all N row entries, zero diagonal included
    const double var = std::max(0.0, sum_sq * inv_n - (sum * inv_n) * (sum * inv_n));
    acc += std::sqrt(static_cast<double>(n - 1) * var);
  }
  return acc * inv_n;
}

double local_field_variance(const SpMat& J) {
  const auto n = J.rows();
  if (n == 0) return 0.0;
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (SpMat::InnerIterator it(J, i); it; ++it) sum_sq += it.value() * it.value();
  }
  return sum_sq / static_cast<double>(n);
}

CouplingMatrix build_couplings(const Graph& g) {
  validate_graph(g);

  CouplingMatrix coupl;
  coupl.n = g.n_nodes;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(g.edges.size() * 2);
  for (const Edge& e : g.edges) {
    const double j = -e.w;  // J_ij = -w_ij
    triplets.emplace_back(e.i, e.j, j);
    triplets.emplace_back(e.j, e.i, j);
  }
  coupl.J.resize(g.n_nodes, g.n_nodes);
  coupl.J.setFromTriplets(triplets.begin(), triplets.end());
  coupl.J.makeCompressed();

  coupl.sigma_h_sq = local_field_variance(coupl.J);
  coupl.s_j = g.n_nodes >= 2 ? field_scale(coupl.J) : 0.0;
  if (coupl.s_j > 0.0) {
    coupl.i0_min = 0.1 / coupl.s_j;
    coupl.i0_max = 10.0 / coupl.s_j;
  } else {
    coupl.i0_min = std::numeric_limits<double>::quiet_NaN();
    coupl.i0_max = std::numeric_limits<double>::quiet_NaN();
  }
  return coupl;
}

}  // namespace pbit
