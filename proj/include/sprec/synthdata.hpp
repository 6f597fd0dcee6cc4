#pragma once

// Ground-truth precision models (unit diagonal, off-diagonal 1/3 on the
// edges of a tridiagonal chain, a heap-indexed binary tree, or disjoint
// cliques) and seeded Gaussian / Laplace samplers.

#include <cstddef>
#include <cstdint>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "sprec/kernels.hpp"
#include "sprec/matrix.hpp"
#include "sprec/support_mask.hpp"

namespace sprec {

enum class GraphKind { tridiagonal, binary_tree, block_diagonal };
enum class Distribution { gaussian, laplace };

const char* to_string(GraphKind kind) noexcept;
const char* to_string(Distribution dist) noexcept;

struct GraphSpec {
  GraphKind kind = GraphKind::tridiagonal;
  std::size_t p = 0;           // tridiagonal
  std::size_t depth = 0;       // binary_tree
  std::size_t blocks = 0;      // block_diagonal
  std::size_t block_size = 0;  // block_diagonal
  double off_value = 1.0 / 3.0;

  nlohmann::json to_json() const;
};

struct GraphModel {
  GraphSpec spec;
  SymMatrix omega;

  std::size_t dim() const { return omega.dim(); }
  SupportMask truth() const { return support_of(omega); }
  /// Nonzero entries per row including the diagonal (the kappa of U(kappa, delta)).
  std::size_t max_row_nonzeros() const;
};

GraphModel make_tridiagonal(std::size_t p, double off_value = 1.0 / 3.0);
/// p = depth (depth + 1) / 2 nodes; node i (1-based) links to 2i and 2i + 1.
GraphModel make_binary_tree(std::size_t depth, double off_value = 1.0 / 3.0);
/// Diagonal blocks off_value * 1 + (1 - off_value) I.
GraphModel make_block_diagonal(std::size_t blocks, std::size_t block_size,
                               double off_value = 1.0 / 3.0);
GraphModel make_model(const GraphSpec& spec);

struct SampleSet {
  Eigen::MatrixXd x;  // n x p, rows are samples
  GraphSpec model;
  Distribution distribution;
  std::uint64_t seed;
};

/// Caches the Cholesky factor of Sigma = Omega^{-1} so replicates reuse it.
/// Row r uses its own stream derived from (seed, r): results do not depend on
/// the number of threads.
class Sampler {
 public:
  explicit Sampler(const GraphModel& model);

  const Eigen::MatrixXd& sigma_factor() const { return chol_; }
  SymMatrix sigma() const;

  /// Gaussian: x = L z. Laplace: x = sqrt(w) L z with w ~ Exp(1), so cov(x) = Sigma.
  SampleSet sample(std::size_t n, std::uint64_t seed, Distribution dist,
                   Exec exec = Exec::parallel) const;

 private:
  GraphSpec spec_;
  Eigen::MatrixXd chol_;
};

SampleSet sample_gaussian(const GraphModel& model, std::size_t n, std::uint64_t seed);
SampleSet sample_laplace(const GraphModel& model, std::size_t n, std::uint64_t seed);

}  // namespace sprec
