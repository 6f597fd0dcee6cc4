#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace sprec {

enum class ErrorKind {
  invalid_input,
  degenerate_input,
  not_positive_definite,
  convergence,
  dimension_mismatch,
  empty_sample,
  insufficient_sample,
  infeasible_scheme,
  undefined_rate,
  model_construction,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library. `index()` carries the offending
/// row/column, pivot, line number or block index when one exists; `value()`
/// carries a numeric diagnostic (the last duality gap for convergence errors).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> index = std::nullopt, double value = 0.0);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> index() const noexcept { return index_; }
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> index_;
  double value_;
};

}  // namespace sprec
