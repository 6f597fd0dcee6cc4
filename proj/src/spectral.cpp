#include "sprec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sprec/rng.hpp"

namespace sprec {

namespace {

// Last component of the eigenvector of the symmetric tridiagonal T (diagonal
// a, off-diagonal b) for the eigenvalue theta, by two inverse-iteration sweeps.
double last_eigvec_component(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             double theta) {
  const auto k = a.size();
  if (k == 1) return 1.0;
  const double scale = std::max(1.0, std::abs(theta));
  const double shift = theta + 1e-13 * scale;
  Eigen::VectorXd y = Eigen::VectorXd::Ones(k);
  std::vector<double> c(static_cast<std::size_t>(k)), d(static_cast<std::size_t>(k));
  for (int sweep = 0; sweep < 2; ++sweep) {
    // Thomas algorithm on (T - shift I) z = y.
    double piv = a[0] - shift;
    if (piv == 0.0) piv = 1e-300;
    d[0] = y[0] / piv;
    c[0] = b[0] / piv;
    for (Eigen::Index i = 1; i < k; ++i) {
      double m = a[i] - shift - b[i - 1] * c[static_cast<std::size_t>(i - 1)];
      if (m == 0.0) m = 1e-300;
      if (i < k - 1) c[static_cast<std::size_t>(i)] = b[i] / m;
      d[static_cast<std::size_t>(i)] =
          (y[i] - b[i - 1] * d[static_cast<std::size_t>(i - 1)]) / m;
    }
    y[k - 1] = d[static_cast<std::size_t>(k - 1)];
    for (Eigen::Index i = k - 2; i >= 0; --i)
      y[i] = d[static_cast<std::size_t>(i)] - c[static_cast<std::size_t>(i)] * y[i + 1];
    const double nrm = y.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) return 1.0;
    y /= nrm;
  }
  return y[k - 1];
}

}  // namespace

ExtremeEigenvalues lanczos_extremes(std::size_t dim, const MatVec& apply,
                                    const LanczosOptions& options) {
  ExtremeEigenvalues out;
  if (dim == 0) {
    out.converged = true;
    return out;
  }
  const auto n = static_cast<Eigen::Index>(dim);
  const std::size_t cap =
      options.max_iterations == 0 ? std::min<std::size_t>(dim, 600)
                                  : std::min(options.max_iterations, dim);

  Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(cap) + 1);
  {
    Rng rng(options.seed);
    std::normal_distribution<double> normal;
    for (Eigen::Index i = 0; i < n; ++i) basis(i, 0) = normal(rng);
    basis.col(0).normalize();
  }
  Eigen::VectorXd alpha(static_cast<Eigen::Index>(cap));
  Eigen::VectorXd beta(static_cast<Eigen::Index>(cap));
  Eigen::VectorXd w(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;

  for (std::size_t j = 0; j < cap; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    apply(basis.col(jj), w);
    alpha[jj] = basis.col(jj).dot(w);
    // Full reorthogonalization, applied twice (classical Gram-Schmidt twice).
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd coeff = basis.leftCols(jj + 1).transpose() * w;
      w.noalias() -= basis.leftCols(jj + 1) * coeff;
    }
    beta[jj] = w.norm();

    const Eigen::Index k = jj + 1;
    const bool last = (j + 1 == cap);
    const double scale_hint = std::max(std::abs(alpha.head(k).maxCoeff()),
                                       std::abs(alpha.head(k).minCoeff()));
    const bool breakdown = beta[jj] <= 1e-14 * std::max(scale_hint, beta.head(k).maxCoeff());
    if (!(breakdown || last || k <= 4 || k % 4 == 0)) {
      basis.col(jj + 1) = w / beta[jj];
      continue;
    }

    Eigen::VectorXd sub = beta.head(std::max<Eigen::Index>(k - 1, 1));
    Eigen::VectorXd diag = alpha.head(k);
    if (k == 1) {
      out.min = out.max = diag[0];
    } else {
      Eigen::VectorXd sub_k = beta.head(k - 1);
      tri.computeFromTridiagonal(diag, sub_k, Eigen::EigenvaluesOnly);
      out.min = tri.eigenvalues()[0];
      out.max = tri.eigenvalues()[k - 1];
    }
    out.iterations = j + 1;
    if (breakdown) {
      out.converged = true;
      return out;
    }
    const double radius = std::max(std::abs(out.min), std::abs(out.max));
    if (radius == 0.0) {
      // Krylov space sees only zeros so far; keep going unless exhausted.
      if (last) out.converged = false;
    } else {
      const double res_max = beta[jj] * std::abs(last_eigvec_component(diag, sub, out.max));
      const double res_min = beta[jj] * std::abs(last_eigvec_component(diag, sub, out.min));
      if (res_max <= options.tol * radius && res_min <= options.tol * radius) {
        out.converged = true;
        return out;
      }
    }
    if (last) break;
    basis.col(jj + 1) = w / beta[jj];
  }
  out.converged = out.converged || (cap == dim);
  return out;
}

}  // namespace sprec
