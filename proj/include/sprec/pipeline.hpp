#pragma once

// covariance -> graphical lasso -> debias -> normalize -> threshold search.

#include <Eigen/Dense>

#include "sprec/estimators.hpp"
#include "sprec/support_search.hpp"

namespace sprec {

struct PipelineSettings {
  GlassoSettings glasso;
  bool center = false;
  SearchMode mode = SearchMode::fast;
};

struct PipelineResult {
  CovarianceEstimate cov;
  PrecisionEstimate debiased;
  RecoveryTrace trace;
};

/// Runs `steps` shrink steps from the debiased graphical lasso estimate. The
/// iterate after s steps is the estimate for alpha = gamma^{-s}, so one run
/// serves every alpha on the gamma grid up to gamma^{-steps}.
PipelineResult run_pipeline(const Eigen::MatrixXd& x, const PipelineSettings& settings,
                            double gamma, int steps);

}  // namespace sprec
