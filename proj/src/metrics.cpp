#include "sprec/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "sprec/io.hpp"

namespace sprec {

PairCounts count_pairs(const SupportMask& est, const SupportMask& truth) {
  if (est.dim() != truth.dim()) throw Error(ErrorKind::dimension_mismatch, "mask dims differ");
  PairCounts c;
  const std::size_t p = est.dim();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      const bool t = truth.get(i, j);
      const bool e = est.get(i, j);
      if (t) {
        ++c.positives;
        c.tp += e;
      } else {
        ++c.negatives;
        c.fp += e;
      }
    }
  return c;
}

double fp_rate(const SupportMask& est, const SupportMask& truth) {
  const auto c = count_pairs(est, truth);
  if (c.negatives == 0)
    throw Error(ErrorKind::undefined_rate, "truth has no zero off-diagonal pairs");
  return static_cast<double>(c.fp) / static_cast<double>(c.negatives);
}

double tp_rate(const SupportMask& est, const SupportMask& truth) {
  const auto c = count_pairs(est, truth);
  if (c.positives == 0)
    throw Error(ErrorKind::undefined_rate, "truth has no nonzero off-diagonal pairs");
  return static_cast<double>(c.tp) / static_cast<double>(c.positives);
}

MetricsRecord make_record(double target_alpha, const SupportMask& est, const SupportMask& truth) {
  const auto c = count_pairs(est, truth);
  if (c.negatives == 0 || c.positives == 0)
    throw Error(ErrorKind::undefined_rate, "truth must have both zero and nonzero pairs");
  return {target_alpha,
          static_cast<double>(c.fp) / static_cast<double>(c.negatives),
          static_cast<double>(c.tp) / static_cast<double>(c.positives),
          c.fp,
          c.tp,
          c.negatives,
          c.positives};
}

std::vector<MetricsRecord> roc_table(const std::vector<RocRun>& runs) {
  if (runs.empty()) throw Error(ErrorKind::invalid_input, "roc_table needs at least one run");
  std::vector<MetricsRecord> out;
  for (const auto& r : runs) out.push_back(make_record(r.target_alpha, r.est, r.truth));
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.target_alpha > b.target_alpha;
  });
  return out;
}

std::string roc_csv(const std::vector<MetricsRecord>& records) {
  std::ostringstream os;
  os << "alpha,fpr,tpr,fp,tp,neg,pos\n";
  for (const auto& r : records)
    os << io::format_double(r.target_alpha) << ',' << io::format_double(r.empirical_fpr) << ','
       << io::format_double(r.empirical_tpr) << ',' << r.fp_count << ',' << r.tp_count << ','
       << r.negatives << ',' << r.positives << '\n';
  return os.str();
}

nlohmann::json roc_json(const std::vector<MetricsRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records)
    arr.push_back({{"alpha", r.target_alpha},
                   {"fpr", r.empirical_fpr},
                   {"tpr", r.empirical_tpr},
                   {"fp", r.fp_count},
                   {"tp", r.tp_count},
                   {"neg", r.negatives},
                   {"pos", r.positives}});
  return arr;
}

}  // namespace sprec
