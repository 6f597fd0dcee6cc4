#include "sprec/pipeline.hpp"

namespace sprec {

PipelineResult run_pipeline(const Eigen::MatrixXd& x, const PipelineSettings& settings,
                            double gamma, int steps) {
  auto cov = empirical_covariance(x, settings.center);
  const auto glasso = graphical_lasso(cov, settings.glasso);
  auto debiased = debias_glasso(glasso, cov);
  auto trace = error_controlled_estimate(debiased, SearchConfig{gamma, steps}, settings.mode);
  return {std::move(cov), std::move(debiased), std::move(trace)};
}

}  // namespace sprec
