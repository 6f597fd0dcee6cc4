#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "sprec/matrix.hpp"

namespace sprec {

/// Symmetric boolean pattern over unordered off-diagonal pairs. The diagonal
/// is implicitly selected and never stored or counted.
class SupportMask {
 public:
  explicit SupportMask(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t pair_count() const noexcept { return bits_.size(); }

  bool get(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, bool selected);

  /// Selected off-diagonal pairs.
  std::size_t count() const;
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

  /// Selected count per row (diagonal excluded).
  std::vector<std::size_t> row_degrees() const;

  bool subset_of(const SupportMask& other) const;
  bool operator==(const SupportMask& other) const = default;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t dim_;
  std::vector<std::uint8_t> bits_;  // packed strict upper triangle, row-major
};

/// Off-diagonal (i,j) selected iff |M_ij| > tol.
SupportMask support_of(const SymMatrix& m, double tol = 0.0);

}  // namespace sprec
