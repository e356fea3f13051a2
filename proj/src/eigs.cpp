#include "pbit/eigs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pbit/errors.hpp"
#include "pbit/rng.hpp"

namespace pbit {

namespace {

constexpr int kDenseLimit = 2048;

EigenPairs dense_smallest(const SpMat& J, int k) {
  const Eigen::MatrixXd dense = Eigen::MatrixXd(J);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("dense symmetric eigensolver failed to converge");
  }
  EigenPairs out;
  out.values = solver.eigenvalues().head(k);
  out.vectors = solver.eigenvectors().leftCols(k);
  return out;
}

// Lanczos with full (two-pass) reorthogonalization. After j+1 completed
// steps: alpha[0..j] and beta[0..j] are filled, where beta[j] = ||residual||
// couples step j to vector j+1, and the Ritz residual bound for pair (theta,
// s) of the order-(j+1) tridiagonal is beta[j] * |s_last|.
EigenPairs lanczos_smallest(const SpMat& J, int k) {
  const int n = static_cast<int>(J.rows());
  const double scale = std::max(matrix_inf_norm(J), 1e-300);
  const double ritz_tol = 1e-8 * scale;
  const int m_cap = std::min(n, std::max(16 * k, 700));

  Eigen::MatrixXd basis(n, m_cap);
  std::vector<double> alpha, beta;
  alpha.reserve(static_cast<std::size_t>(m_cap));
  beta.reserve(static_cast<std::size_t>(m_cap));

  RngStream rng(0x9d2c5680u);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform_pm1();
  v.normalize();
  basis.col(0) = v;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri_solver;
  auto solve_tridiagonal = [&](int order) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(order, order);
    for (int i = 0; i < order; ++i) {
      T(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < order) {
        T(i, i + 1) = beta[static_cast<std::size_t>(i)];
        T(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
    }
    tri_solver.compute(T);
    if (tri_solver.info() != Eigen::Success) {
      throw NumericalError("lanczos: tridiagonal eigensolver failed");
    }
  };

  Eigen::VectorXd w(n);
  int built = 0;
  const int check_every = std::max(2 * k, 24);

  for (int j = 0; j < m_cap; ++j) {
    w.noalias() = J * basis.col(j);
    const double a = basis.col(j).dot(w);
    alpha.push_back(a);
    w -= a * basis.col(j);
    if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * basis.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
    }
    double b = w.norm();
    built = j + 1;

    if (b < 1e-12 * scale) {
      // invariant subspace exhausted; continue from a fresh orthogonal direction
      Eigen::VectorXd fresh(n);
      for (int i = 0; i < n; ++i) fresh[i] = rng.uniform_pm1();
      for (int pass = 0; pass < 2; ++pass) {
        fresh -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * fresh);
      }
      const double fn = fresh.norm();
      if (fn < 1e-12 || j + 1 >= m_cap) {
        beta.push_back(0.0);
        break;  // whole space spanned (or cap reached); Ritz pairs are exact
      }
      beta.push_back(0.0);
      basis.col(j + 1) = fresh / fn;
      continue;
    }

    beta.push_back(b);
    if (j + 1 >= m_cap) break;
    basis.col(j + 1) = w / b;

    if (built >= k && (built % check_every == 0 || built == m_cap)) {
      solve_tridiagonal(built);
      bool ok = true;
      for (int r = 0; r < k; ++r) {
        if (std::abs(b * tri_solver.eigenvectors()(built - 1, r)) > ritz_tol) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
  }

  if (static_cast<int>(alpha.size()) < k) {
    throw NumericalError("lanczos: basis collapsed before reaching k = " + std::to_string(k));
  }

  solve_tridiagonal(built);
  EigenPairs out;
  out.values = tri_solver.eigenvalues().head(k);
  out.vectors = basis.leftCols(built) * tri_solver.eigenvectors().leftCols(k);
  for (int j = 0; j < k; ++j) out.vectors.col(j).normalize();

  for (int j = 0; j < k; ++j) {
    const double res = (J * out.vectors.col(j) - out.values[j] * out.vectors.col(j)).norm();
    if (res > 1e-6 * scale) {
      throw NumericalError("lanczos: residual " + std::to_string(res) + " exceeds 1e-6 * ||J|| (" +
                           std::to_string(1e-6 * scale) + ") after " + std::to_string(built) +
                           " iterations");
    }
  }
  return out;
}

}  // namespace

double matrix_inf_norm(const SpMat& J) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < J.rows(); ++i) {
    double row = 0.0;
    for (SpMat::InnerIterator it(J, i); it; ++it) row += std::abs(it.value());
    best = std::max(best, row);
  }
  return best;
}

EigenPairs smallest_eigenpairs(const SpMat& J, int k, EigenMethod method) {
  const int n = static_cast<int>(J.rows());
  if (n < 1) throw DataError("smallest_eigenpairs: empty matrix");
  if (J.rows() != J.cols()) throw DataError("smallest_eigenpairs: matrix must be square");
  if (k < 1 || k > n) {
    throw DataError("smallest_eigenpairs: k = " + std::to_string(k) + " outside [1, " +
                    std::to_string(n) + "]");
  }
  if (method == EigenMethod::automatic) {
    method = n <= kDenseLimit ? EigenMethod::dense : EigenMethod::lanczos;
  }
  return method == EigenMethod::dense ? dense_smallest(J, k) : lanczos_smallest(J, k);
}

}  // namespace pbit
