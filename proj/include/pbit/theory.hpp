#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "pbit/coupling.hpp"
#include "pbit/eigs.hpp"

namespace pbit {

struct TheoryParams {
  double i0 = 1.0;
  double c = 1.0;            // p = 1/c, for pointwise Jacobian evaluations
  int horizon_T = 40;
  double threshold_R = 10.0;
  double gamma = 1.0;        // IPR penalty exponent
  int n_modes_K = 8;         // candidate modes for the IPR-corrected variant
  double c_max = 20.0;       // bisection bracket upper end
};

void validate_params(const TheoryParams& params);

enum class BoundaryVariant { non_ipr, ipr_corrected };

std::string_view to_string(BoundaryVariant v);

struct ModeInfo {
  double eigenvalue = 0.0;
  Eigen::VectorXd eigenvector;  // unit norm
  double ipr = 0.0;             // sum of fourth powers, in [1/n, 1]
  double score = 0.0;           // |eigenvalue| / ipr^gamma
};

struct BoundaryPoint {
  double i0;
  double c_star;
  double lambda_osc;
  double ipr;
  double alpha;
};

struct BoundaryCurve {
  std::vector<BoundaryPoint> points;
  BoundaryVariant variant;
};

// m(t+1) = (1-p) m + p tanh(i0 (h + J m)), componentwise.
Eigen::VectorXd mean_field_step(const Eigen::VectorXd& m, const SpMat& J,
                                const Eigen::VectorXd& h, double p, double i0);

// Damped fixed-point iteration of the mean-field map from m0.
Eigen::VectorXd mean_field_fixed_point(const SpMat& J, const Eigen::VectorXd& h,
                                       double p, double i0, Eigen::VectorXd m0,
                                       double damping = 0.5, double tol = 1e-10,
                                       int max_iter = 10000);

// A = (1-p) I + p D i0 J with D = diag(1 - tanh^2(i0 (h + J m_star))).
Eigen::MatrixXd jacobian(const Eigen::VectorXd& m_star, const SpMat& J,
                         const Eigen::VectorXd& h, double p, double i0);

// Gaussian effective gain E_{h ~ N(0, sigma_h^2)}[sech^2(i0 h)], evaluated
// by Gauss-Hermite quadrature with node doubling from 64 until successive
// results differ by < 1e-8.
double alpha_eff(double i0, double sigma_h);

// Extreme eigenvalues of A_eff = (1-p) I + p alpha i0 J, from the extreme
// eigenvalues of J.
std::pair<double, double> effective_jacobian_spectrum(const SpMat& J, double p,
                                                      double i0, double alpha);

// K algebraically smallest eigenpairs of J with IPR and mode score, sorted
// ascending by eigenvalue. Within a degenerate cluster (eigenvalues equal to
// 1e-8 relative) each member reports the minimum IPR over the cluster basis.
std::vector<ModeInfo> extreme_modes(const SpMat& J, int k, double gamma = 1.0,
                                    EigenMethod method = EigenMethod::automatic);

// Spectral-product growth proxy G = lambda_abs^T, computed in log space.
double growth_factor(double lambda_abs, int horizon_T);

// ln G >= ln R (boundary inclusive).
bool is_observable(double growth, double threshold_R);

// max_{||x||=1} ||A^T x||, by explicit matrix powering; dense oracle,
// guarded to n <= 256.
double finite_time_norm_growth(const Eigen::MatrixXd& A, int horizon_T);

// Smallest c >= 1 at which the oscillatory response r = alpha i0 lambda_osc
// is no longer observable within the horizon: the mode eigenvalue of A_eff,
// (1 - 1/c) + (1/c) r, must exceed -R^(1/T). Clamps to 1 when even c = 1 is
// non-observable; returns +infinity when still observable at c_max.
double critical_c_scalar(double mode_response, const TheoryParams& params);

struct CriticalPoint {
  double c_star;
  double lambda_osc;
  double ipr;
  double alpha;
};

CriticalPoint critical_point(const CouplingMatrix& coupl,
                             const TheoryParams& params, BoundaryVariant variant);

double critical_c(const CouplingMatrix& coupl, const TheoryParams& params,
                  BoundaryVariant variant);

// critical_point mapped over an i0 grid; the eigendecomposition of J is
// computed once and reused. Grid values must lie in (0, i0_max].
BoundaryCurve boundary_curve(const CouplingMatrix& coupl,
                             const std::vector<double>& i0_grid,
                             const TheoryParams& params, BoundaryVariant variant);

}  // namespace pbit
