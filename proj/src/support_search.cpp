#include "sprec/support_search.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "sprec/kernels.hpp"

namespace sprec {

void SearchConfig::validate() const {
  if (!(gamma > 1.0) || !std::isfinite(gamma))
    throw Error(ErrorKind::invalid_input, "gamma must be > 1");
  if (steps < 0) throw Error(ErrorKind::invalid_input, "steps must be >= 0");
}

double SearchConfig::alpha() const { return std::pow(gamma, -static_cast<double>(steps)); }

int steps_for_alpha(double alpha, double gamma) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorKind::invalid_input, "alpha must be in (0,1]");
  if (!(gamma > 1.0)) throw Error(ErrorKind::invalid_input, "gamma must be > 1");
  const double exact = std::log(1.0 / alpha) / std::log(gamma);
  // Absorb rounding so that alpha = gamma^{-k} maps to k, not k + 1.
  return static_cast<int>(std::ceil(exact - 1e-9));
}

namespace {

// Off-diagonal entries of M - I sorted by decreasing magnitude, plus the
// distinct magnitudes (ascending) and how many entries each keeps.
struct CandidateSet {
  std::size_t dim;
  std::vector<OffDiagEntry> entries;  // descending |value|
  std::vector<double> magnitudes;     // ascending, distinct
  std::vector<std::size_t> kept;      // kept[k] = #entries with |v| >= magnitudes[k]
  Eigen::VectorXd diag;               // diag(M) - 1

  std::size_t remove_all_index() const { return magnitudes.size(); }
};

CandidateSet build_candidates(const SymMatrix& m) {
  CandidateSet c;
  c.dim = m.dim();
  for (std::size_t i = 0; i < c.dim; ++i)
    if (m(i, i) != 1.0)
      throw Error(ErrorKind::invalid_input,
                  "threshold search needs a unit diagonal (entry " + std::to_string(i) + ")", i);
  c.diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(c.dim));
  for (std::size_t j = 0; j < c.dim; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      const double v = m(i, j);
      if (v != 0.0)
        c.entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), v});
    }
  std::stable_sort(c.entries.begin(), c.entries.end(), [](const auto& a, const auto& b) {
    return std::abs(a.value) > std::abs(b.value);
  });
  for (std::size_t e = c.entries.size(); e-- > 0;) {
    const double mag = std::abs(c.entries[e].value);
    if (c.magnitudes.empty() || mag != c.magnitudes.back()) {
      c.magnitudes.push_back(mag);
      c.kept.push_back(e + 1);
    }
  }
  return c;
}

class NormOracle {
 public:
  explicit NormOracle(const CandidateSet& c) : c_(c) {}

  double at(std::size_t k) {
    if (auto it = cache_.find(k); it != cache_.end()) return it->second;
    const std::size_t count = k >= c_.magnitudes.size() ? 0 : c_.kept[k];
    const SymCsr a = make_sym_csr(c_.dim, c_.entries.data(), count, c_.diag);
    const double v = operator_norm(a);
    cache_.emplace(k, v);
    ++evaluations_;
    return v;
  }
  std::size_t evaluations() const { return evaluations_; }

 private:
  const CandidateSet& c_;
  std::map<std::size_t, double> cache_;
  std::size_t evaluations_ = 0;
};

Threshold threshold_for(const CandidateSet& c, std::size_t k) {
  if (k >= c.magnitudes.size()) return Threshold::remove_everything();
  return {false, c.magnitudes[k]};
}

SymMatrix apply_threshold(const SymMatrix& m, const Threshold& t) {
  if (t.remove_all) return SymMatrix::identity(m.dim());
  return hard_threshold_offdiag(m, t.value);
}

}  // namespace

ThresholdResult min_threshold_for_radius(const SymMatrix& m, double r_target, SearchMode mode) {
  if (!(r_target >= 0.0)) throw Error(ErrorKind::invalid_input, "radius must be >= 0");
  const CandidateSet c = build_candidates(m);
  NormOracle norm(c);
  if (c.entries.empty()) {
    // Nothing to remove: t = 0 leaves M as is.
    return {Threshold{false, 0.0}, m, norm.at(c.remove_all_index()), norm.evaluations()};
  }
  const std::size_t sentinel = c.remove_all_index();
  auto ok = [&](std::size_t k) { return norm.at(k) <= r_target; };

  // Smallest k in [0, sentinel] with ok(k), assuming ok is monotone. The
  // sentinel (result I_p, norm 0) satisfies every r_target >= 0.
  std::size_t lo = 0, hi = sentinel;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) hi = mid;
    else lo = mid + 1;
  }
  std::size_t found = lo;
  if (mode == SearchMode::strict) {
    for (std::size_t k = found; k-- > 0;)
      if (ok(k)) found = k;
  }
  const Threshold t = threshold_for(c, found);
  return {t, apply_threshold(m, t), norm.at(found), norm.evaluations()};
}

std::vector<CandidateNorm> scan_candidates(const SymMatrix& m) {
  const CandidateSet c = build_candidates(m);
  NormOracle norm(c);
  std::vector<CandidateNorm> out;
  for (std::size_t k = 0; k <= c.remove_all_index(); ++k) out.push_back({threshold_for(c, k), norm.at(k)});
  return out;
}

StepResult shrink_step(const SymMatrix& current, double gamma, int s, SearchMode mode) {
  if (!(gamma > 1.0)) throw Error(ErrorKind::invalid_input, "gamma must be > 1");
  const CandidateSet c = build_candidates(current);
  const SymCsr full = make_sym_csr(c.dim, c.entries.data(), c.entries.size(), c.diag);
  const double r = operator_norm(full);
  const double r_prime = r * std::pow(gamma, -0.5);
  auto res = min_threshold_for_radius(current, r_prime, mode);
  StepRecord rec{s, r, r_prime, res.t, res.thresholded.offdiag_nonzeros()};
  return {rec, std::move(res.thresholded), res.norm};
}

double RecoveryTrace::alpha() const { return std::pow(gamma, -static_cast<double>(steps)); }

SymMatrix RecoveryTrace::iterate(int s) const {
  if (s < 0 || s > static_cast<int>(records.size()))
    throw Error(ErrorKind::invalid_input, "iterate index out of range");
  // phi(phi(M; a); b) == phi(M; max(a, b)), so Omega_s is a single threshold of Omega_0.
  double t = 0.0;
  for (int k = 0; k < s; ++k) {
    if (records[static_cast<std::size_t>(k)].t.remove_all)
      return SymMatrix::diagonal(start.matrix.diagonal_entries());
    t = std::max(t, records[static_cast<std::size_t>(k)].t.value);
  }
  return hard_threshold_offdiag(start.matrix, t);
}

RecoveryTrace error_controlled_estimate(const PrecisionEstimate& initial,
                                        const SearchConfig& config, SearchMode mode) {
  config.validate();
  PrecisionEstimate start{unit_diagonal_normalize(initial.matrix), initial.kind, initial.lambda,
                          true};
  RecoveryTrace trace{config.gamma, config.steps, {}, start, start};
  SymMatrix current = start.matrix;
  for (int s = 0; s < config.steps; ++s) {
    auto step = shrink_step(current, config.gamma, s, mode);
    trace.records.push_back(step.record);
    current = std::move(step.next);
  }
  trace.final.matrix = std::move(current);
  return trace;
}

nlohmann::json to_json(const RecoveryTrace& trace) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : trace.records) {
    records.push_back({{"s", r.s},
                       {"r", r.r},
                       {"r_prime", r.r_prime},
                       {"t", r.t.remove_all ? nlohmann::json(nullptr) : nlohmann::json(r.t.value)},
                       {"nonzeros", r.nonzeros}});
  }
  return {{"gamma", trace.gamma}, {"steps", trace.steps}, {"alpha", trace.alpha()},
          {"records", records}};
}

}  // namespace sprec
