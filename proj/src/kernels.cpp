#include "sprec/kernels.hpp"

#include <algorithm>
#include <exception>

#ifdef SPREC_HAVE_OPENMP
#include <omp.h>
#endif

namespace sprec {

SymCsr make_sym_csr(std::size_t dim, const OffDiagEntry* entries, std::size_t count,
                    const Eigen::VectorXd& diag) {
  SymCsr a;
  a.dim = dim;
  a.diag = diag;
  a.row_start.assign(dim + 1, 0);
  for (std::size_t e = 0; e < count; ++e) {
    ++a.row_start[entries[e].i + 1];
    ++a.row_start[entries[e].j + 1];
  }
  for (std::size_t r = 0; r < dim; ++r) a.row_start[r + 1] += a.row_start[r];
  a.col.resize(2 * count);
  a.val.resize(2 * count);
  std::vector<std::size_t> fill(a.row_start.begin(), a.row_start.end() - 1);
  for (std::size_t e = 0; e < count; ++e) {
    const auto& en = entries[e];
    a.col[fill[en.i]] = en.j;
    a.val[fill[en.i]++] = en.value;
    a.col[fill[en.j]] = en.i;
    a.val[fill[en.j]++] = en.value;
  }
  return a;
}

namespace kernels {

namespace {
inline double csr_row(const SymCsr& a, const Eigen::VectorXd& x, std::size_t r) {
  double acc = a.diag[static_cast<Eigen::Index>(r)] * x[static_cast<Eigen::Index>(r)];
  for (std::size_t k = a.row_start[r]; k < a.row_start[r + 1]; ++k) acc += a.val[k] * x[a.col[k]];
  return acc;
}
}  // namespace

void csr_matvec(const SymCsr& a, const Eigen::VectorXd& x, Eigen::VectorXd& y, Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(a.dim);
  y.resize(n);
  if (exec == Exec::serial) {
    for (std::ptrdiff_t r = 0; r < n; ++r) y[r] = csr_row(a, x, static_cast<std::size_t>(r));
    return;
  }
#pragma omp parallel for schedule(static) if (a.col.size() > 20000)
  for (std::ptrdiff_t r = 0; r < n; ++r) y[r] = csr_row(a, x, static_cast<std::size_t>(r));
}

void dense_matvec(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, Eigen::VectorXd& y,
                  Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
  y.resize(n);
  if (exec == Exec::serial) {
    for (std::ptrdiff_t r = 0; r < n; ++r) {
      double acc = 0.0;
      for (std::ptrdiff_t c = 0; c < n; ++c) acc += a(c, r) * x[c];
      y[r] = acc;
    }
    return;
  }
#pragma omp parallel for schedule(static) if (n > 128)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (std::ptrdiff_t c = 0; c < n; ++c) acc += a(c, r) * x[c];
    y[r] = acc;
  }
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& x, bool center, double divisor, Exec exec) {
  const auto n = x.rows();
  const auto p = x.cols();
  Eigen::MatrixXd xc = x;
  if (center && n > 0) {
    for (Eigen::Index c = 0; c < p; ++c) {
      double mean = 0.0;
      for (Eigen::Index r = 0; r < n; ++r) mean += x(r, c);
      mean /= static_cast<double>(n);
      for (Eigen::Index r = 0; r < n; ++r) xc(r, c) = x(r, c) - mean;
    }
  }
  Eigen::MatrixXd g(p, p);
  auto column = [&](std::ptrdiff_t j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      double acc = 0.0;
      for (Eigen::Index r = 0; r < n; ++r) acc += xc(r, i) * xc(r, j);
      g(i, j) = acc / divisor;
    }
  };
  if (exec == Exec::serial) {
    for (std::ptrdiff_t j = 0; j < p; ++j) column(j);
  } else {
#pragma omp parallel for schedule(dynamic, 8) if (p > 64)
    for (std::ptrdiff_t j = 0; j < p; ++j) column(j);
  }
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = j + 1; i < p; ++i) g(i, j) = g(j, i);
  return g;
}

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body,
                    Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(count);
  // Exceptions cannot leave an OpenMP region; keep one per index and rethrow
  // the lowest-index failure so the reported error does not depend on timing.
  std::vector<std::exception_ptr> failures(count);
  auto guarded = [&](std::ptrdiff_t i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      failures[static_cast<std::size_t>(i)] = std::current_exception();
    }
  };
  if (exec == Exec::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) guarded(i);
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) guarded(i);
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

int max_threads() noexcept {
#ifdef SPREC_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace kernels
}  // namespace sprec
