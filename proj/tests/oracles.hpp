#pragma once

// Reference implementations for tests. Plain loops over std::vector, no
// Eigen solvers, so they share no code path with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sprec/matrix.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const sprec::SymMatrix& m) {
  Dense a(m.dim(), std::vector<double>(m.dim()));
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) a[i][j] = m(i, j);
  return a;
}

/// Cyclic Jacobi rotations; eigenvalues in ascending order.
inline std::vector<double> jacobi_eigenvalues(Dense a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double opnorm(const Dense& a) {
  const auto ev = jacobi_eigenvalues(a);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

/// ||phi(M; t) - I|| with the diagonal left alone, keep iff |m_ij| >= t.
inline double thresholded_norm(const Dense& m, double t, bool remove_all) {
  Dense a = m;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (i == j) a[i][j] = 0.0;
      else if (remove_all || std::abs(a[i][j]) < t) a[i][j] = 0.0;
    }
  return opnorm(a);
}

struct ScanResult {
  bool remove_all;
  double t;
  bool monotone;  // predicate false...false true...true over ascending candidates
};

/// Exhaustive minimum over {distinct off-diagonal magnitudes} + REMOVE_ALL.
inline ScanResult threshold_scan(const Dense& m, double r) {
  std::vector<double> mags;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (m[i][j] != 0.0) mags.push_back(std::abs(m[i][j]));
  std::sort(mags.begin(), mags.end());
  mags.erase(std::unique(mags.begin(), mags.end()), mags.end());
  if (mags.empty()) return {false, 0.0, true};
  std::vector<bool> ok;
  for (double t : mags) ok.push_back(thresholded_norm(m, t, false) <= r);
  ok.push_back(true);
  bool monotone = true;
  for (std::size_t k = 1; k < ok.size(); ++k)
    if (ok[k - 1] && !ok[k]) monotone = false;
  for (std::size_t k = 0; k < mags.size(); ++k)
    if (ok[k]) return {false, mags[k], monotone};
  return {true, 0.0, monotone};
}

/// Gauss-Jordan with partial pivoting.
inline Dense inverse(Dense a) {
  const std::size_t n = a.size();
  Dense inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const double d = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= d;
      inv[c][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

/// Phi^{-1}(1 - tail) by bisection on erfc.
inline double upper_quantile(double tail) {
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(mid / std::sqrt(2.0)) > tail) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double binomial_tail(int k, int d, double a) {
  double total = 0.0;
  for (int i = d; i <= k; ++i) {
    double c = 1.0;
    for (int j = 0; j < i; ++j) c = c * (k - j) / (j + 1);
    total += c * std::pow(a, i) * std::pow(1.0 - a, k - i);
  }
  return total;
}

inline Dense covariance(const Eigen::MatrixXd& x, bool center) {
  const auto n = static_cast<std::size_t>(x.rows()), p = static_cast<std::size_t>(x.cols());
  std::vector<double> mu(p, 0.0);
  if (center)
    for (std::size_t c = 0; c < p; ++c) {
      for (std::size_t r = 0; r < n; ++r) mu[c] += x(r, c);
      mu[c] /= static_cast<double>(n);
    }
  Dense s(p, std::vector<double>(p, 0.0));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) s[i][j] += (x(r, i) - mu[i]) * (x(r, j) - mu[j]);
  for (auto& row : s)
    for (auto& v : row) v /= static_cast<double>(n);
  return s;
}

}  // namespace oracle

namespace gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Symmetric with entries U[-scale, scale] kept with probability `density`.
inline sprec::SymMatrix symmetric(Rng& rng, std::size_t p, double density, double scale = 1.0) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      if (uniform(rng, 0, 1) < density) m(i, j) = m(j, i) = uniform(rng, -scale, scale);
  return sprec::SymMatrix(m);
}

/// Unit diagonal, sparse off-diagonal entries. With `ties` the magnitudes are
/// drawn from a small set so equal candidates occur.
inline sprec::SymMatrix unit_diagonal(Rng& rng, std::size_t p, double density, bool ties = false) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (uniform(rng, 0, 1) < density) {
        double v = ties ? 0.1 * std::floor(uniform(rng, 1, 6)) : uniform(rng, 0.01, 0.9);
        if (uniform(rng, 0, 1) < 0.5) v = -v;
        m(i, j) = m(j, i) = v;
      }
  return sprec::SymMatrix(m);
}

/// A A^T / p + shift I.
inline sprec::SymMatrix spd(Rng& rng, std::size_t p, double shift = 0.5) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = uniform(rng, -1, 1);
  Eigen::MatrixXd m = a * a.transpose() / static_cast<double>(p);
  m.diagonal().array() += shift;
  return sprec::SymMatrix::symmetrize(m);
}

inline Eigen::MatrixXd gaussian_data(Rng& rng, std::size_t n, std::size_t p) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = z(rng);
  return x;
}

}  // namespace gen
