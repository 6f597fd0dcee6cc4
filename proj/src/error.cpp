#include "sprec/error.hpp"

namespace sprec {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::not_positive_definite: return "not-positive-definite";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::empty_sample: return "empty-sample";
    case ErrorKind::insufficient_sample: return "insufficient-sample";
    case ErrorKind::infeasible_scheme: return "infeasible-scheme";
    case ErrorKind::undefined_rate: return "undefined-rate";
    case ErrorKind::model_construction: return "model-construction";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<std::size_t> index, double value)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      index_(index),
      value_(value) {}

}  // namespace sprec
