#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace sprec {

using MatVec = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LanczosOptions {
  double tol = 1e-10;              // relative residual on both extreme Ritz pairs
  std::size_t max_iterations = 0;  // 0 selects min(dim, 600)
  std::uint64_t seed = 0x5eed;     // start vector
};

struct ExtremeEigenvalues {
  double min = 0.0;
  double max = 0.0;
  std::size_t iterations = 0;
  bool converged = false;

  double abs_max() const { return std::max(-min, max); }
};

/// Lanczos with full reorthogonalization for the two extreme eigenvalues of a
/// symmetric operator. Convergence is declared when both extreme Ritz
/// residuals fall below tol times the current spectral radius estimate.
ExtremeEigenvalues lanczos_extremes(std::size_t dim, const MatVec& apply,
                                    const LanczosOptions& options = {});

}  // namespace sprec
