#pragma once

// False/true positive rates over unordered off-diagonal pairs.

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sprec/support_mask.hpp"

namespace sprec {

struct PairCounts {
  std::size_t fp = 0;
  std::size_t tp = 0;
  std::size_t negatives = 0;  // truth-zero pairs
  std::size_t positives = 0;  // truth-nonzero pairs
};

PairCounts count_pairs(const SupportMask& est, const SupportMask& truth);

/// |est \ truth| / |complement of truth|. Throws undefined_rate when truth is complete.
double fp_rate(const SupportMask& est, const SupportMask& truth);

/// |est ∩ truth| / |truth|. Throws undefined_rate when truth is empty.
double tp_rate(const SupportMask& est, const SupportMask& truth);

struct MetricsRecord {
  double target_alpha;
  double empirical_fpr;
  double empirical_tpr;
  std::size_t fp_count;
  std::size_t tp_count;
  std::size_t negatives;
  std::size_t positives;
};

MetricsRecord make_record(double target_alpha, const SupportMask& est, const SupportMask& truth);

struct RocRun {
  double target_alpha;
  SupportMask est;
  SupportMask truth;
};

/// One record per run, sorted by target alpha descending (stable).
std::vector<MetricsRecord> roc_table(const std::vector<RocRun>& runs);

/// Header "alpha,fpr,tpr,fp,tp,neg,pos".
std::string roc_csv(const std::vector<MetricsRecord>& records);
nlohmann::json roc_json(const std::vector<MetricsRecord>& records);

}  // namespace sprec
