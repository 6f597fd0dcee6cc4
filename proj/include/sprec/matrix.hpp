#pragma once

// Dense symmetric-matrix numerics: the value type every estimator, search
// iterate and ground-truth model is carried in.

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sprec/error.hpp"
#include "sprec/kernels.hpp"

namespace sprec {

/// Dense symmetric p x p matrix with finite entries. Symmetry is exact: the
/// checked constructor rejects any asymmetry and `symmetrize` averages
/// M and M^T. Immutable after construction.
class SymMatrix {
 public:
  /// Throws invalid_input unless `m` is non-empty, square, finite and
  /// exactly symmetric.
  explicit SymMatrix(Eigen::MatrixXd m);

  /// (m + m^T) / 2.
  static SymMatrix symmetrize(const Eigen::MatrixXd& m);
  static SymMatrix identity(std::size_t dim);
  static SymMatrix zeros(std::size_t dim);
  static SymMatrix diagonal(const Eigen::VectorXd& d);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& dense() const noexcept { return m_; }
  Eigen::VectorXd diagonal_entries() const { return m_.diagonal(); }

  /// Off-diagonal entries with |value| > 0, upper triangle.
  std::size_t offdiag_nonzeros() const;

  bool operator==(const SymMatrix& other) const { return m_ == other.m_; }

 private:
  struct Unchecked {};
  SymMatrix(Eigen::MatrixXd m, Unchecked) : m_(std::move(m)) {}

  Eigen::MatrixXd m_;
};

struct EigenResult {
  Eigen::VectorXd values;                  // descending
  std::optional<Eigen::MatrixXd> vectors;  // orthonormal columns matching `values`
};

enum class SchattenOrder { trace, hilbert_schmidt, operator_norm };

/// Full symmetric eigendecomposition (dense QR on the tridiagonal form).
EigenResult symmetric_eigen(const SymMatrix& m, bool with_vectors = false);

/// Largest absolute eigenvalue. p <= 64 uses the dense eigensolver; larger
/// matrices use Lanczos with a dense fallback when it does not converge.
double operator_norm(const SymMatrix& m, Exec exec = Exec::parallel);

/// Operator norm of a sparse symmetric operator, same strategy as above.
double operator_norm(const SymCsr& a, Exec exec = Exec::parallel);

double schatten_norm(const SymMatrix& m, SchattenOrder order);

/// phi(M; t): entries with |M_ij| < t set to zero, entries with |M_ij| >= t kept.
SymMatrix hard_threshold(const SymMatrix& m, double t);

/// phi applied to off-diagonal entries only; the diagonal is left untouched.
SymMatrix hard_threshold_offdiag(const SymMatrix& m, double t);

/// D^{-1/2} M D^{-1/2} with D = diag(M); the output diagonal is exactly 1.
SymMatrix unit_diagonal_normalize(const SymMatrix& m);

/// Lower-triangular L with L L^T = M. Throws not_positive_definite with the
/// failing pivot index.
Eigen::MatrixXd spd_cholesky(const SymMatrix& m);

/// M^{-1} via Cholesky, symmetrized.
SymMatrix spd_inverse(const SymMatrix& m);

/// Largest |M_ij - N_ij|.
double max_abs_diff(const SymMatrix& a, const SymMatrix& b);

}  // namespace sprec
