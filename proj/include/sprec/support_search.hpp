#pragma once

// Error-controlled thresholding: starting from a unit-diagonal estimate,
// each step shrinks the operator-norm distance to the identity by gamma^{-1/2}
// and picks the smallest hard threshold that lands inside the shrunk ball.
// After m steps the target false positive rate is gamma^{-m}.

#include <cstddef>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "sprec/estimators.hpp"
#include "sprec/matrix.hpp"

namespace sprec {

struct SearchConfig {
  double gamma = 2.0;
  int steps = 1;  // m; 0 runs no steps and returns the normalized start

  void validate() const;
  double alpha() const;  // gamma^{-steps}
};

/// Smallest m with gamma^{-m} <= alpha.
int steps_for_alpha(double alpha, double gamma);

/// A realized off-diagonal magnitude, or the sentinel that zeroes every
/// off-diagonal entry (result I_p).
struct Threshold {
  bool remove_all = false;
  double value = 0.0;

  static Threshold remove_everything() { return {true, 0.0}; }
  bool operator==(const Threshold&) const = default;
};

enum class SearchMode {
  fast,    // binary search assuming the norm predicate is monotone in t
  strict,  // binary search, then scan every smaller candidate for the true minimum
};

struct ThresholdResult {
  Threshold t;
  SymMatrix thresholded;
  double norm;             // operator_norm(thresholded - I)
  std::size_t evaluations; // operator-norm evaluations spent
};

/// Smallest candidate threshold t with ||phi(M; t) - I|| <= r_target over the
/// candidates {distinct off-diagonal magnitudes} + REMOVE_ALL. The returned
/// pair always satisfies the bound. The diagonal is never thresholded.
ThresholdResult min_threshold_for_radius(const SymMatrix& m, double r_target,
                                         SearchMode mode = SearchMode::fast);

/// Every candidate threshold of `m`, ascending, with its norm. Exhaustive;
/// intended for verification on small matrices.
struct CandidateNorm {
  Threshold t;
  double norm;
};
std::vector<CandidateNorm> scan_candidates(const SymMatrix& m);

struct StepRecord {
  int s;             // index of the iterate the step starts from
  double r;          // ||Omega_s - I||
  double r_prime;    // r * gamma^{-1/2}
  Threshold t;       // t_{s+1}
  std::size_t nonzeros;  // off-diagonal pairs of Omega_{s+1}
};

struct StepResult {
  StepRecord record;
  SymMatrix next;
  double next_norm;
};

StepResult shrink_step(const SymMatrix& current, double gamma, int s = 0,
                       SearchMode mode = SearchMode::fast);

struct RecoveryTrace {
  double gamma;
  int steps;
  std::vector<StepRecord> records;
  PrecisionEstimate start;  // normalized initial estimate (Omega_0)
  PrecisionEstimate final;  // Omega_m

  double alpha() const;
  /// Omega_s for 0 <= s <= steps, rebuilt from the start and the thresholds.
  SymMatrix iterate(int s) const;
};

RecoveryTrace error_controlled_estimate(const PrecisionEstimate& initial,
                                        const SearchConfig& config,
                                        SearchMode mode = SearchMode::fast);

/// {gamma, steps, alpha, records:[{s, r, r_prime, t, nonzeros}]}; a REMOVE_ALL
/// threshold is written as null.
nlohmann::json to_json(const RecoveryTrace& trace);

}  // namespace sprec
