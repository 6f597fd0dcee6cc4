#pragma once

// Split-and-vote: partition the rows into k disjoint blocks, recover a
// support per block, keep an edge when at least d blocks select it. With
// per-block rate a, P(false edge survives) <= 2^k a^d.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "sprec/pipeline.hpp"
#include "sprec/support_mask.hpp"

namespace sprec {

struct SubsampleScheme {
  int k = 2;
  int d = 2;
  std::uint64_t seed = 1;
  double target_alpha = 0.0009765625;

  void validate() const;
};

/// k disjoint blocks of floor(n/k) row indices from a seeded permutation; the
/// n mod k leftover rows are dropped.
std::vector<std::vector<std::size_t>> partition_sample(std::size_t n, int k, std::uint64_t seed);

/// (target * 2^{-k})^{1/d}, the per-block rate with 2^k a^d = target.
double per_subsample_alpha(double target_alpha, int k, int d);

struct BinomialBound {
  double bound;       // min(1, 2^k a^d)
  double exact_tail;  // sum_{i=d}^{k} C(k,i) a^i (1-a)^{k-i}
};
BinomialBound binomial_fp_bound(int k, int d, double alpha);

struct CombinedSupport {
  SupportMask mask;
  std::vector<int> vote_counts;  // packed upper triangle, same layout as pair order
  int k;
  int d;
  double per_subsample_alpha;

  int votes(std::size_t i, std::size_t j) const;
};

CombinedSupport combine_supports(const std::vector<SupportMask>& masks, int d);

struct SubsampledRecovery {
  CombinedSupport combined;
  std::vector<RecoveryTrace> traces;  // one per block, block order
  SymMatrix combined_values;          // mean block value over selecting blocks, I elsewhere
  int steps_per_block;
};

/// Per block: covariance -> glasso -> debias -> search with
/// m = ceil(log_gamma(1 / a_sub)) steps. Blocks run concurrently; the merge is
/// independent of execution order. Solver errors carry the block index.
SubsampledRecovery subsampled_recovery(const Eigen::MatrixXd& x, const SubsampleScheme& scheme,
                                       const PipelineSettings& settings, double gamma,
                                       Exec exec = Exec::parallel);

/// Same as above for several targets; each block pipeline runs once with the
/// largest step count and every target reads its iterate from the trace.
/// `traces` hold all steps up to that largest count.
std::vector<SubsampledRecovery> subsampled_recovery_grid(const Eigen::MatrixXd& x,
                                                        const SubsampleScheme& scheme,
                                                        const std::vector<double>& targets,
                                                        const PipelineSettings& settings,
                                                        double gamma,
                                                        Exec exec = Exec::parallel);

/// Rows of x selected by `rows`.
Eigen::MatrixXd select_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows);

nlohmann::json summary_json(const CombinedSupport& c, double target_alpha);

}  // namespace sprec
