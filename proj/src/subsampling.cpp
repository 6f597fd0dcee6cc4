#include "sprec/subsampling.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <numeric>
#include <string>

#include "sprec/kernels.hpp"
#include "sprec/rng.hpp"
#include "sprec/stats.hpp"

namespace sprec {

void SubsampleScheme::validate() const {
  if (k < 1) throw Error(ErrorKind::invalid_input, "k must be >= 1");
  if (d < 1 || d > k) throw Error(ErrorKind::invalid_input, "d must be in [1, k]");
  if (!(target_alpha > 0.0 && target_alpha < 1.0))
    throw Error(ErrorKind::invalid_input, "target alpha must be in (0,1)");
}

std::vector<std::vector<std::size_t>> partition_sample(std::size_t n, int k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorKind::invalid_input, "k must be >= 1");
  const std::size_t size = n / static_cast<std::size_t>(k);
  if (size < 2)
    throw Error(ErrorKind::insufficient_sample,
                "blocks of " + std::to_string(size) + " rows; need n/k >= 2");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  // Fisher-Yates with an explicit bounded draw so the permutation does not
  // depend on the standard library's shuffle.
  Rng rng(derive_seed(seed, 0x7061727469ULL));
  for (std::size_t i = n; i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw;
    do draw = rng(); while (draw >= limit);
    std::swap(perm[i - 1], perm[static_cast<std::size_t>(draw % bound)]);
  }
  std::vector<std::vector<std::size_t>> blocks(static_cast<std::size_t>(k));
  for (std::size_t b = 0; b < blocks.size(); ++b)
    blocks[b].assign(perm.begin() + static_cast<std::ptrdiff_t>(b * size),
                     perm.begin() + static_cast<std::ptrdiff_t>((b + 1) * size));
  return blocks;
}

double per_subsample_alpha(double target_alpha, int k, int d) {
  if (!(target_alpha > 0.0 && target_alpha < 1.0))
    throw Error(ErrorKind::invalid_input, "target alpha must be in (0,1)");
  if (k < 1 || d < 1 || d > k) throw Error(ErrorKind::invalid_input, "need 1 <= d <= k");
  const double a = std::pow(std::ldexp(target_alpha, -k), 1.0 / d);
  if (!(a < 1.0))
    throw Error(ErrorKind::infeasible_scheme, "per-subsample alpha >= 1; target too loose");
  return a;
}

BinomialBound binomial_fp_bound(int k, int d, double alpha) {
  if (k < 1 || d < 1 || d > k) throw Error(ErrorKind::invalid_input, "need 1 <= d <= k");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::invalid_input, "alpha must be in [0,1]");
  double tail = 0.0;
  for (int i = d; i <= k; ++i)
    tail += stats::binomial_coefficient(static_cast<unsigned>(k), static_cast<unsigned>(i)) *
            std::pow(alpha, i) * std::pow(1.0 - alpha, k - i);
  return {std::min(1.0, std::pow(2.0, k) * std::pow(alpha, d)), tail};
}

int CombinedSupport::votes(std::size_t i, std::size_t j) const {
  if (i == j) return k;
  if (i > j) std::swap(i, j);
  const std::size_t p = mask.dim();
  return vote_counts[i * (2 * p - i - 1) / 2 + (j - i - 1)];
}

CombinedSupport combine_supports(const std::vector<SupportMask>& masks, int d) {
  if (masks.empty()) throw Error(ErrorKind::invalid_input, "no masks to combine");
  const int k = static_cast<int>(masks.size());
  if (d < 1 || d > k) throw Error(ErrorKind::invalid_input, "d must be in [1, k]");
  const std::size_t p = masks.front().dim();
  for (const auto& m : masks)
    if (m.dim() != p) throw Error(ErrorKind::dimension_mismatch, "masks differ in dim");
  CombinedSupport out{SupportMask(p), std::vector<int>(masks.front().pair_count(), 0), k, d, 0.0};
  std::size_t idx = 0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j, ++idx) {
      int v = 0;
      for (const auto& m : masks) v += m.get(i, j) ? 1 : 0;
      out.vote_counts[idx] = v;
      if (v >= d) out.mask.set(i, j, true);
    }
  return out;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r)
    out.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(rows[r]));
  return out;
}

std::vector<SubsampledRecovery> subsampled_recovery_grid(const Eigen::MatrixXd& x,
                                                        const SubsampleScheme& scheme,
                                                        const std::vector<double>& targets,
                                                        const PipelineSettings& settings,
                                                        double gamma, Exec exec) {
  scheme.validate();
  if (targets.empty()) throw Error(ErrorKind::invalid_input, "no target alpha given");
  std::vector<double> a_sub;
  std::vector<int> steps;
  for (double target : targets) {
    SubsampleScheme one = scheme;
    one.target_alpha = target;
    one.validate();
    a_sub.push_back(per_subsample_alpha(target, scheme.k, scheme.d));
    steps.push_back(steps_for_alpha(a_sub.back(), gamma));
  }
  const int max_steps = *std::max_element(steps.begin(), steps.end());
  const auto blocks = partition_sample(static_cast<std::size_t>(x.rows()), scheme.k, scheme.seed);

  std::vector<std::optional<RecoveryTrace>> traces(blocks.size());
  kernels::for_each_index(
      blocks.size(),
      [&](std::size_t b) {
        try {
          traces[b] = run_pipeline(select_rows(x, blocks[b]), settings, gamma, max_steps).trace;
        } catch (const Error& e) {
          throw Error(e.kind(), "block " + std::to_string(b) + ": " + e.what(), b, e.value());
        }
      },
      exec);

  std::vector<SubsampledRecovery> out;
  const auto p = static_cast<Eigen::Index>(x.cols());
  for (std::size_t a = 0; a < targets.size(); ++a) {
    std::vector<SupportMask> masks;
    std::vector<SymMatrix> iterates;
    for (const auto& t : traces) {
      iterates.push_back(t->iterate(steps[a]));
      masks.push_back(support_of(iterates.back()));
    }
    auto combined = combine_supports(masks, scheme.d);
    combined.per_subsample_alpha = a_sub[a];

    Eigen::MatrixXd values = Eigen::MatrixXd::Identity(p, p);
    for (const auto& [i, j] : combined.mask.pairs()) {
      double sum = 0.0;
      int hits = 0;
      for (const auto& it : iterates) {
        const double v = it(i, j);
        if (v != 0.0) {
          sum += v;
          ++hits;
        }
      }
      const double mean = sum / hits;
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mean;
      values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = mean;
    }
    std::vector<RecoveryTrace> block_traces;
    for (const auto& t : traces) block_traces.push_back(*t);
    out.push_back({std::move(combined), std::move(block_traces), SymMatrix(std::move(values)),
                   steps[a]});
  }
  return out;
}

SubsampledRecovery subsampled_recovery(const Eigen::MatrixXd& x, const SubsampleScheme& scheme,
                                       const PipelineSettings& settings, double gamma,
                                       Exec exec) {
  auto grid = subsampled_recovery_grid(x, scheme, {scheme.target_alpha}, settings, gamma, exec);
  return std::move(grid.front());
}

nlohmann::json summary_json(const CombinedSupport& c, double target_alpha) {
  const auto bound = binomial_fp_bound(c.k, c.d, c.per_subsample_alpha);
  return {{"k", c.k},
          {"d", c.d},
          {"alpha_sub", c.per_subsample_alpha},
          {"target_alpha", target_alpha},
          {"bound", bound.bound},
          {"exact_tail", bound.exact_tail}};
}

}  // namespace sprec
