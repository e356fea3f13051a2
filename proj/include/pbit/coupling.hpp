#pragma once

#include <Eigen/SparseCore>

#include "pbit/graph.hpp"

namespace pbit {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Ising couplings J = -w plus the graph-derived scalars used by both the
// simulator and the theory. J is symmetric with zero diagonal by
// construction. i0_min/i0_max are NaN when s_j == 0 (zero couplings); use
// i0_endpoints() for checked access.
struct CouplingMatrix {
  int n = 0;
  SpMat J;
  double s_j = 0.0;
  double sigma_h_sq = 0.0;
  double i0_min = 0.0;
  double i0_max = 0.0;

  // Throws DataError when the endpoints are undefined (s_j == 0).
  std::pair<double, double> i0_endpoints() const;
};

CouplingMatrix build_couplings(const Graph& g);

// s_J = (1/N) sum_i sqrt((N-1) Var_j(J_ij)), the row variance taken over all
// N entries of row i including the zero diagonal. Throws DataError for N < 2.
double field_scale(const SpMat& J);

// sigma_h^2 = (1/N) sum_ij J_ij^2
double local_field_variance(const SpMat& J);

}  // namespace pbit
