#include "sprec/support_mask.hpp"

#include <cmath>
#include <string>

namespace sprec {

SupportMask::SupportMask(std::size_t dim) : dim_(dim), bits_(dim * (dim == 0 ? 0 : dim - 1) / 2, 0) {
  if (dim == 0) throw Error(ErrorKind::invalid_input, "support mask dim must be >= 1");
}

std::size_t SupportMask::index(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  if (j >= dim_ || i == j)
    throw Error(ErrorKind::invalid_input,
                "support mask index (" + std::to_string(i) + "," + std::to_string(j) + ") invalid");
  // Rows 0..i-1 contribute (dim-1) + (dim-2) + ... + (dim-i) cells.
  return i * (2 * dim_ - i - 1) / 2 + (j - i - 1);
}

bool SupportMask::get(std::size_t i, std::size_t j) const {
  if (i == j) return true;
  return bits_[index(i, j)] != 0;
}

void SupportMask::set(std::size_t i, std::size_t j, bool selected) {
  bits_[index(i, j)] = selected ? 1 : 0;
}

std::size_t SupportMask::count() const {
  std::size_t c = 0;
  for (auto b : bits_) c += b;
  return c;
}

std::vector<std::pair<std::size_t, std::size_t>> SupportMask::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j, ++k)
      if (bits_[k]) out.emplace_back(i, j);
  return out;
}

std::vector<std::size_t> SupportMask::row_degrees() const {
  std::vector<std::size_t> deg(dim_, 0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j, ++k)
      if (bits_[k]) {
        ++deg[i];
        ++deg[j];
      }
  return deg;
}

bool SupportMask::subset_of(const SupportMask& other) const {
  if (other.dim_ != dim_) throw Error(ErrorKind::dimension_mismatch, "support masks differ in dim");
  for (std::size_t k = 0; k < bits_.size(); ++k)
    if (bits_[k] && !other.bits_[k]) return false;
  return true;
}

SupportMask support_of(const SymMatrix& m, double tol) {
  if (!(tol >= 0.0)) throw Error(ErrorKind::invalid_input, "support tolerance must be >= 0");
  SupportMask mask(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i + 1; j < m.dim(); ++j)
      if (std::abs(m(i, j)) > tol) mask.set(i, j, true);
  return mask;
}

}  // namespace sprec
