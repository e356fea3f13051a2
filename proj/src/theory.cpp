#include "pbit/theory.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pbit/errors.hpp"
#include "pbit/gauss_hermite.hpp"

namespace pbit {

namespace {

double sech_sq(double y) {
  const double t = std::exp(-std::abs(y));
  const double s = 2.0 * t / (1.0 + t * t);
  return s * s;
}

Eigen::VectorXd local_fields(const Eigen::VectorXd& m, const SpMat& J, const Eigen::VectorXd& h) {
  if (m.size() != J.rows()) throw DataError("mean-field state dimension mismatch");
  if (h.size() != 0 && h.size() != J.rows()) throw DataError("bias vector dimension mismatch");
  Eigen::VectorXd f = J * m;
  if (h.size() != 0) f += h;
  return f;
}

}  // namespace

void validate_params(const TheoryParams& params) {
  if (!(params.i0 > 0.0)) throw DataError("i0 must be positive");
  if (!(params.c >= 1.0)) throw DataError("c must be >= 1");
  if (params.horizon_T < 1) throw DataError("horizon T must be >= 1");
  if (!(params.threshold_R > 1.0)) throw DataError("observability threshold R must be > 1");
  if (!(params.gamma > 0.0)) throw DataError("gamma must be positive");
  if (params.n_modes_K < 1) throw DataError("mode count K must be >= 1");
  if (!(params.c_max > 1.0)) throw DataError("c_max must be > 1");
}

std::string_view to_string(BoundaryVariant v) {
  return v == BoundaryVariant::non_ipr ? "non_ipr" : "ipr_corrected";
}

Eigen::VectorXd mean_field_step(const Eigen::VectorXd& m, const SpMat& J,
                                const Eigen::VectorXd& h, double p, double i0) {
  if (m.size() > 0 && (m.minCoeff() < -1.0 - 1e-12 || m.maxCoeff() > 1.0 + 1e-12)) {
    throw DataError("mean_field_step: entries of m must lie in [-1, 1]");
  }
  const Eigen::VectorXd f = local_fields(m, J, h);
  return (1.0 - p) * m + p * (i0 * f.array()).tanh().matrix();
}

Eigen::VectorXd mean_field_fixed_point(const SpMat& J, const Eigen::VectorXd& h, double p,
                                       double i0, Eigen::VectorXd m0, double damping, double tol,
                                       int max_iter) {
  Eigen::VectorXd m = std::move(m0);
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd next = (1.0 - damping) * m + damping * mean_field_step(m, J, h, p, i0);
    const double delta = (next - m).cwiseAbs().maxCoeff();
    m = next;
    if (delta <= tol) return m;
  }
  throw NumericalError("mean_field_fixed_point: no convergence within " +
                       std::to_string(max_iter) + " iterations");
}

Eigen::MatrixXd jacobian(const Eigen::VectorXd& m_star, const SpMat& J, const Eigen::VectorXd& h,
                         double p, double i0) {
  const Eigen::VectorXd f = local_fields(m_star, J, h);
  Eigen::VectorXd gains(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) gains[i] = sech_sq(i0 * f[i]);
  Eigen::MatrixXd A = p * i0 * (gains.asDiagonal() * Eigen::MatrixXd(J));
  A.diagonal().array() += 1.0 - p;
  return A;
}

double alpha_eff(double i0, double sigma_h) {
  if (sigma_h < 0.0) throw DataError("alpha_eff: sigma_h must be non-negative");
  if (i0 == 0.0 || sigma_h == 0.0) return 1.0;

  const double b = i0 * sigma_h * std::numbers::sqrt2;
  constexpr double inv_sqrt_pi = 0.56418958354775628695;
  constexpr int kMaxNodes = 1 << 18;

  auto evaluate = [&](int n) {
    const GaussHermiteRule& rule = gauss_hermite_rule(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      if (rule.weights[i] == 0.0) continue;
      acc += rule.weights[i] * sech_sq(b * rule.nodes[i]);
    }
    return acc * inv_sqrt_pi;
  };

  double prev = evaluate(64);
  for (int n = 128; n <= kMaxNodes; n *= 2) {
    const double cur = evaluate(n);
    if (std::abs(cur - prev) < 1e-8) return cur;
    prev = cur;
  }
  throw NumericalError("alpha_eff: Gauss-Hermite doubling did not settle below 1e-8 by " +
                       std::to_string(kMaxNodes) + " nodes (i0 sigma_h = " +
                       std::to_string(i0 * sigma_h) + ")");
}

std::pair<double, double> effective_jacobian_spectrum(const SpMat& J, double p, double i0,
                                                      double alpha) {
  const int n = static_cast<int>(J.rows());
  if (n < 1) throw DataError("effective_jacobian_spectrum: empty matrix");
  double lam_min, lam_max;
  if (n <= 2) {
    const Eigen::MatrixXd dense(J);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    lam_min = solver.eigenvalues()(0);
    lam_max = solver.eigenvalues()(n - 1);
  } else {
    lam_min = smallest_eigenpairs(J, 1).values(0);
    SpMat neg = -J;
    lam_max = -smallest_eigenpairs(neg, 1).values(0);
  }
  // the map lambda -> (1-p) + p alpha i0 lambda is increasing, so extremes map to extremes
  const double coef = p * alpha * i0;
  return {(1.0 - p) + coef * lam_min, (1.0 - p) + coef * lam_max};
}

std::vector<ModeInfo> extreme_modes(const SpMat& J, int k, double gamma, EigenMethod method) {
  EigenPairs pairs = smallest_eigenpairs(J, k, method);

  std::vector<ModeInfo> modes(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    ModeInfo& mode = modes[static_cast<std::size_t>(j)];
    mode.eigenvalue = pairs.values(j);
    mode.eigenvector = pairs.vectors.col(j);
    mode.ipr = mode.eigenvector.array().pow(4).sum();
  }

  // Degenerate clusters (eigenvalues equal to 1e-8 relative): eigenvectors
  // inside a cluster are basis-dependent, so every member reports the
  // cluster-minimal IPR, favoring delocalized representatives.
  std::size_t start = 0;
  while (start < modes.size()) {
    std::size_t stop = start + 1;
    while (stop < modes.size()) {
      const double a = modes[stop - 1].eigenvalue, b = modes[stop].eigenvalue;
      const double tol = 1e-8 * std::max(std::abs(a), std::abs(b));
      if (std::abs(a - b) > tol) break;
      ++stop;
    }
    double min_ipr = modes[start].ipr;
    for (std::size_t i = start + 1; i < stop; ++i) min_ipr = std::min(min_ipr, modes[i].ipr);
    for (std::size_t i = start; i < stop; ++i) modes[i].ipr = min_ipr;
    start = stop;
  }

  for (ModeInfo& mode : modes) {
    mode.score = std::abs(mode.eigenvalue) / std::pow(mode.ipr, gamma);
  }
  return modes;
}

double growth_factor(double lambda_abs, int horizon_T) {
  if (lambda_abs < 0.0) throw DataError("growth_factor: lambda_abs must be non-negative");
  if (horizon_T < 1) throw DataError("growth_factor: T must be >= 1");
  if (lambda_abs == 0.0) return 0.0;
  return std::exp(static_cast<double>(horizon_T) * std::log(lambda_abs));
}

bool is_observable(double growth, double threshold_R) {
  if (growth < 0.0) throw DataError("is_observable: G must be non-negative");
  if (!(threshold_R > 1.0)) throw DataError("is_observable: R must be > 1");
  if (growth == 0.0) return false;
  return std::log(growth) >= std::log(threshold_R);
}

double finite_time_norm_growth(const Eigen::MatrixXd& A, int horizon_T) {
  if (A.rows() != A.cols()) throw DataError("finite_time_norm_growth: matrix must be square");
  if (A.rows() > 256) {
    throw DataError("finite_time_norm_growth: n = " + std::to_string(A.rows()) +
                    " exceeds the n <= 256 dense guard");
  }
  if (horizon_T < 1) throw DataError("finite_time_norm_growth: T must be >= 1");

  // binary powering
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(A.rows(), A.cols());
  Eigen::MatrixXd base = A;
  int t = horizon_T;
  while (t > 0) {
    if (t & 1) result = result * base;
    t >>= 1;
    if (t > 0) base = base * base;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(result);
  return svd.singularValues()(0);
}

double critical_c_scalar(double mode_response, const TheoryParams& params) {
  validate_params(params);
  const double thr = std::pow(params.threshold_R, 1.0 / static_cast<double>(params.horizon_T));
  // mode eigenvalue of A_eff at synchrony c
  auto mode_eigenvalue = [&](double c) { return 1.0 - (1.0 - mode_response) / c; };
  auto observable = [&](double c) { return mode_eigenvalue(c) <= -thr; };

  if (!observable(1.0)) return 1.0;  // clamp: oscillation invisible even at full synchrony
  if (observable(params.c_max)) return std::numeric_limits<double>::infinity();

  double lo = 1.0, hi = params.c_max;  // observable at lo, not at hi
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (observable(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

struct ModeChoice {
  double lambda_osc;
  double ipr;
};

ModeChoice select_mode(const std::vector<ModeInfo>& modes, BoundaryVariant variant) {
  if (variant == BoundaryVariant::non_ipr) {
    return {modes.front().eigenvalue, modes.front().ipr};
  }
  // ties (within rounding) go to the more negative eigenvalue; candidates are
  // sorted ascending, so strict improvement keeps the earlier mode
  std::size_t best = 0;
  for (std::size_t i = 1; i < modes.size(); ++i) {
    const double tol = 1e-9 * std::max(modes[i].score, modes[best].score);
    if (modes[i].score > modes[best].score + tol) best = i;
  }
  return {modes[best].eigenvalue, modes[best].ipr};
}

}  // namespace

CriticalPoint critical_point(const CouplingMatrix& coupl, const TheoryParams& params,
                             BoundaryVariant variant) {
  validate_params(params);
  if (!(coupl.s_j > 0.0)) throw DataError("critical_c: degenerate couplings (s_J = 0)");

  const int k = std::min(params.n_modes_K, coupl.n);
  const std::vector<ModeInfo> modes = extreme_modes(coupl.J, k, params.gamma);
  const ModeChoice choice = select_mode(modes, variant);

  const double alpha = alpha_eff(params.i0, std::sqrt(coupl.sigma_h_sq));
  const double response = alpha * params.i0 * choice.lambda_osc;
  return {critical_c_scalar(response, params), choice.lambda_osc, choice.ipr, alpha};
}

double critical_c(const CouplingMatrix& coupl, const TheoryParams& params,
                  BoundaryVariant variant) {
  return critical_point(coupl, params, variant).c_star;
}

BoundaryCurve boundary_curve(const CouplingMatrix& coupl, const std::vector<double>& i0_grid,
                             const TheoryParams& params, BoundaryVariant variant) {
  if (!(coupl.s_j > 0.0)) throw DataError("boundary_curve: degenerate couplings (s_J = 0)");
  const auto [i0_min, i0_max] = coupl.i0_endpoints();
  for (double i0 : i0_grid) {
    if (!(i0 > 0.0) || i0 > i0_max * (1.0 + 1e-12)) {
      throw DataError("boundary_curve: grid value " + std::to_string(i0) +
                      " outside (0, i0_max = " + std::to_string(i0_max) + "]");
    }
  }

  // the spectrum of J does not depend on i0; decompose once
  const int k = std::min(params.n_modes_K, coupl.n);
  const std::vector<ModeInfo> modes = extreme_modes(coupl.J, k, params.gamma);
  const ModeChoice choice = select_mode(modes, variant);
  const double sigma_h = std::sqrt(coupl.sigma_h_sq);

  BoundaryCurve curve;
  curve.variant = variant;
  curve.points.reserve(i0_grid.size());
  for (double i0 : i0_grid) {
    TheoryParams pt = params;
    pt.i0 = i0;
    validate_params(pt);
    const double alpha = alpha_eff(i0, sigma_h);
    const double response = alpha * i0 * choice.lambda_osc;
    curve.points.push_back({i0, critical_c_scalar(response, pt), choice.lambda_osc, choice.ipr, alpha});
  }
  return curve;
}

}  // namespace pbit
