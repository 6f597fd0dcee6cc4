#pragma once

// Initial precision-matrix estimators: empirical covariance, graphical lasso
// and its debiased form, ridge and its projection-corrected form, and the
// entrywise normal-quantile threshold used as a comparator.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sprec/matrix.hpp"
#include "sprec/support_mask.hpp"

namespace sprec {

struct CovarianceEstimate {
  SymMatrix matrix;
  std::size_t n;
  bool centered;
};

enum class EstimatorKind { glasso, glasso_debiased, ridge, ridge_debiased };

const char* to_string(EstimatorKind kind) noexcept;

struct PrecisionEstimate {
  SymMatrix matrix;
  EstimatorKind kind;
  double lambda;
  bool normalized = false;
};

struct GlassoSettings {
  double lambda = 1.0;
  double tol = 1e-5;         // max entry change of Theta over a sweep
  int max_sweeps = 500;
  bool track_objective = false;

  void validate() const;
};

struct GlassoFit {
  PrecisionEstimate estimate;
  int sweeps = 0;
  std::size_t components = 0;      // blocks solved after screening
  std::vector<double> objective;   // per sweep, only when tracked
};

/// Sigma = n^{-1} sum (X_i - mu)(X_i - mu)^T, mu = column means when `center`,
/// zero otherwise. Rows of x are samples.
CovarianceEstimate empirical_covariance(const Eigen::MatrixXd& x, bool center,
                                        Exec exec = Exec::parallel);

/// Minimizer of tr(S Theta) - log det Theta + lambda * sum_{i != j} |Theta_ij|
/// by block coordinate descent over columns. The problem is first split into
/// the connected components of {|S_ij| > lambda}, which decouple exactly.
GlassoFit graphical_lasso_fit(const CovarianceEstimate& cov, const GlassoSettings& settings);
PrecisionEstimate graphical_lasso(const CovarianceEstimate& cov, const GlassoSettings& settings);

/// Objective value; +inf when theta is not positive definite.
double glasso_objective(const SymMatrix& s, const SymMatrix& theta, double lambda);

/// Largest violation of the stationarity conditions of the objective above.
double glasso_kkt_residual(const SymMatrix& s, const SymMatrix& theta, double lambda);

/// 2 Omega - Omega Sigma Omega, symmetrized.
PrecisionEstimate debias_glasso(const PrecisionEstimate& est, const CovarianceEstimate& cov);

/// (Sigma + lambda I)^{-1}.
PrecisionEstimate ridge_precision(const CovarianceEstimate& cov, double lambda);

/// ridge + P0 * aux with P0 = V V^T - diag(V V^T) from the thin SVD X = U D V^T.
/// Singular values below 1e-12 * max are truncated.
PrecisionEstimate debias_ridge(const PrecisionEstimate& ridge, const Eigen::MatrixXd& x,
                               const PrecisionEstimate& aux);

/// Off-diagonal (i,j) kept iff |Omega_ij| >= Phi^{-1}(1 - alpha/(p(p-1))) |Sigma_ij| / sqrt(n).
SupportMask jankova_support(const PrecisionEstimate& debiased, const CovarianceEstimate& cov,
                            std::size_t n, double alpha);

}  // namespace sprec
