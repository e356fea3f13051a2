#pragma once

#include <Eigen/Core>

#include "pbit/coupling.hpp"

namespace pbit {

enum class EigenMethod { automatic, dense, lanczos };

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, unit norm
};

// K algebraically smallest eigenpairs of a symmetric matrix. Dense
// decomposition up to n = 2048, Lanczos with full reorthogonalization
// beyond; residuals are verified against ||J v - lambda v|| <= 1e-6 ||J||.
EigenPairs smallest_eigenpairs(const SpMat& J, int k,
                               EigenMethod method = EigenMethod::automatic);

double matrix_inf_norm(const SpMat& J);

}  // namespace pbit
