#include "sprec/matrix.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "sprec/spectral.hpp"

namespace sprec {

namespace {

constexpr std::size_t kDenseEigenLimit = 64;

void require_finite(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw Error(ErrorKind::invalid_input, "matrix has non-finite entries");
}

double dense_abs_max(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

}  // namespace

SymMatrix::SymMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    throw Error(ErrorKind::invalid_input, "symmetric matrix must be square with dim >= 1");
  require_finite(m_);
  for (Eigen::Index j = 0; j < m_.cols(); ++j)
    for (Eigen::Index i = j + 1; i < m_.rows(); ++i)
      if (m_(i, j) != m_(j, i))
        throw Error(ErrorKind::invalid_input,
                    "matrix is not symmetric at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
}

SymMatrix SymMatrix::symmetrize(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw Error(ErrorKind::invalid_input, "symmetric matrix must be square with dim >= 1");
  require_finite(m);
  Eigen::MatrixXd s = m;
  for (Eigen::Index j = 0; j < s.cols(); ++j)
    for (Eigen::Index i = j + 1; i < s.rows(); ++i) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  return SymMatrix(std::move(s), Unchecked{});
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  if (dim == 0) throw Error(ErrorKind::invalid_input, "dim must be >= 1");
  const auto n = static_cast<Eigen::Index>(dim);
  return SymMatrix(Eigen::MatrixXd::Identity(n, n), Unchecked{});
}

SymMatrix SymMatrix::zeros(std::size_t dim) {
  if (dim == 0) throw Error(ErrorKind::invalid_input, "dim must be >= 1");
  const auto n = static_cast<Eigen::Index>(dim);
  return SymMatrix(Eigen::MatrixXd::Zero(n, n), Unchecked{});
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
  if (d.size() == 0) throw Error(ErrorKind::invalid_input, "dim must be >= 1");
  require_finite(d);
  return SymMatrix(Eigen::MatrixXd(d.asDiagonal()), Unchecked{});
}

std::size_t SymMatrix::offdiag_nonzeros() const {
  std::size_t count = 0;
  for (Eigen::Index j = 0; j < m_.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (m_(i, j) != 0.0) ++count;
  return count;
}

EigenResult symmetric_eigen(const SymMatrix& m, bool with_vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      m.dense(), with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::convergence, "symmetric eigensolver did not converge");
  EigenResult out;
  out.values = es.eigenvalues().reverse();
  if (with_vectors) out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

double operator_norm(const SymMatrix& m, Exec exec) {
  if (m.dim() <= kDenseEigenLimit) return dense_abs_max(m.dense());
  const auto& a = m.dense();
  auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    kernels::dense_matvec(a, x, y, exec);
  };
  const auto ext = lanczos_extremes(m.dim(), apply);
  if (!ext.converged) return dense_abs_max(a);
  return ext.abs_max();
}

double operator_norm(const SymCsr& a, Exec exec) {
  if (a.col.empty()) return a.diag.size() == 0 ? 0.0 : a.diag.cwiseAbs().maxCoeff();
  if (a.dim <= kDenseEigenLimit) {
    const auto n = static_cast<Eigen::Index>(a.dim);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    d.diagonal() = a.diag;
    for (std::size_t r = 0; r < a.dim; ++r)
      for (std::size_t k = a.row_start[r]; k < a.row_start[r + 1]; ++k)
        d(static_cast<Eigen::Index>(r), a.col[k]) = a.val[k];
    return dense_abs_max(d);
  }
  auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    kernels::csr_matvec(a, x, y, exec);
  };
  const auto ext = lanczos_extremes(a.dim, apply);
  if (ext.converged) return ext.abs_max();
  const auto n = static_cast<Eigen::Index>(a.dim);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  d.diagonal() = a.diag;
  for (std::size_t r = 0; r < a.dim; ++r)
    for (std::size_t k = a.row_start[r]; k < a.row_start[r + 1]; ++k)
      d(static_cast<Eigen::Index>(r), a.col[k]) = a.val[k];
  return dense_abs_max(d);
}

double schatten_norm(const SymMatrix& m, SchattenOrder order) {
  switch (order) {
    case SchattenOrder::trace:
      return symmetric_eigen(m).values.cwiseAbs().sum();
    case SchattenOrder::hilbert_schmidt:
      return m.dense().norm();
    case SchattenOrder::operator_norm:
      return operator_norm(m);
  }
  return 0.0;
}

SymMatrix hard_threshold(const SymMatrix& m, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_input, "threshold must be >= 0");
  Eigen::MatrixXd out = m.dense();
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      if (std::abs(out(i, j)) < t) out(i, j) = 0.0;
  return SymMatrix(std::move(out));
}

SymMatrix hard_threshold_offdiag(const SymMatrix& m, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_input, "threshold must be >= 0");
  Eigen::MatrixXd out = m.dense();
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      if (i != j && std::abs(out(i, j)) < t) out(i, j) = 0.0;
  return SymMatrix(std::move(out));
}

SymMatrix unit_diagonal_normalize(const SymMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::VectorXd inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = m.dense()(i, i);
    if (!(d > 0.0))
      throw Error(ErrorKind::degenerate_input,
                  "diagonal entry " + std::to_string(i) + " is not strictly positive",
                  static_cast<std::size_t>(i), d);
    inv_sqrt[i] = 1.0 / std::sqrt(d);
  }
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double v = m.dense()(i, j) * inv_sqrt[i] * inv_sqrt[j];
      out(i, j) = v;
      out(j, i) = v;
    }
    out(j, j) = 1.0;
  }
  return SymMatrix(std::move(out));
}

namespace {
// Unblocked factorization, used only to locate the failing pivot.
[[noreturn]] void report_failed_pivot(const SymMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  const auto& a = m.dense();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  // Column-oriented Cholesky-Banachiewicz so the failing pivot can be reported.
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0) || !std::isfinite(d))
      throw Error(ErrorKind::not_positive_definite,
                  "Cholesky pivot " + std::to_string(j) + " is not positive",
                  static_cast<std::size_t>(j), d);
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    if (j + 1 < n) {
      l.col(j).tail(n - j - 1) =
          (a.col(j).tail(n - j - 1) - l.bottomLeftCorner(n - j - 1, j) * l.row(j).head(j).transpose()) /
          ljj;
    }
  }
  throw Error(ErrorKind::not_positive_definite, "matrix is not numerically positive definite");
}
}  // namespace

Eigen::MatrixXd spd_cholesky(const SymMatrix& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m.dense());
  if (llt.info() != Eigen::Success) report_failed_pivot(m);
  Eigen::MatrixXd l = llt.matrixL();
  if (!(l.diagonal().minCoeff() > 0.0) || !l.allFinite()) report_failed_pivot(m);
  return l;
}

SymMatrix spd_inverse(const SymMatrix& m) {
  const Eigen::MatrixXd l = spd_cholesky(m);
  const auto n = l.rows();
  Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n);
  l.triangularView<Eigen::Lower>().solveInPlace(inv);
  l.transpose().triangularView<Eigen::Upper>().solveInPlace(inv);
  return SymMatrix::symmetrize(inv);
}

double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::dimension_mismatch, "max_abs_diff dims differ");
  return (a.dense() - b.dense()).cwiseAbs().maxCoeff();
}

}  // namespace sprec
