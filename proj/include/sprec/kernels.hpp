#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP version; both produce bit-identical output because work is split
// by output element and each element is reduced in a fixed order.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace sprec {

enum class Exec { serial, parallel };

/// Symmetric sparse matrix with both triangles stored row-wise.
struct SymCsr {
  std::size_t dim = 0;
  std::vector<std::size_t> row_start;  // size dim + 1
  std::vector<std::uint32_t> col;
  std::vector<double> val;
  Eigen::VectorXd diag;  // explicit diagonal, kept out of the row lists

  std::size_t offdiag_nonzeros() const { return col.size() / 2; }
};

struct OffDiagEntry {
  std::uint32_t i;  // i < j
  std::uint32_t j;
  double value;
};

/// Builds a SymCsr from upper-triangle entries (each entry mirrored).
SymCsr make_sym_csr(std::size_t dim, const OffDiagEntry* entries, std::size_t count,
                    const Eigen::VectorXd& diag);

namespace kernels {

/// y = A x for a SymCsr.
void csr_matvec(const SymCsr& a, const Eigen::VectorXd& x, Eigen::VectorXd& y, Exec exec);

/// y = A x for a dense symmetric matrix (column-major; uses A(:,i)·x per row).
void dense_matvec(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, Eigen::VectorXd& y,
                  Exec exec);

/// Scaled Gram matrix X^T X / divisor of the (optionally centered) columns.
Eigen::MatrixXd gram(const Eigen::MatrixXd& x, bool center, double divisor, Exec exec);

/// Runs body(index) for index in [0, count). The parallel variant uses a
/// static schedule; bodies must write only to index-owned storage.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body,
                    Exec exec);

int max_threads() noexcept;

}  // namespace kernels
}  // namespace sprec
