#include "sprec/theory_lab.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "sprec/matrix.hpp"
#include "sprec/rng.hpp"

namespace sprec {

nlohmann::json TrialReport::to_json() const {
  return {{"experiment", experiment}, {"params", params}, {"empirical", empirical},
          {"bound", bound},           {"stderr", stderr_mc}, {"pass", pass}};
}

TrialReport lazy_hoeffding_tail(std::size_t p, double alpha, double m_bound, double t,
                                std::size_t trials, std::uint64_t seed, Exec exec) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::invalid_input, "alpha must be in [0,1]");
  if (!(m_bound > 0.0)) throw Error(ErrorKind::invalid_input, "M must be > 0");
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_input, "t must be >= 0");
  if (trials == 0) throw Error(ErrorKind::invalid_input, "trials must be >= 1");
  const double threshold = t * m_bound * std::sqrt(alpha * static_cast<double>(p));
  std::vector<std::uint8_t> hit(trials, 0);
  if (alpha > 0.0) {
    kernels::for_each_index(
        trials,
        [&](std::size_t r) {
          Rng rng = make_rng(seed, r);
          std::uniform_real_distribution<double> unit(0.0, 1.0);
          std::uniform_real_distribution<double> z(-m_bound, m_bound);
          double sum = 0.0;
          for (std::size_t i = 0; i < p; ++i)
            if (unit(rng) < alpha) sum += z(rng);
          hit[r] = std::abs(sum) >= threshold ? 1 : 0;
        },
        exec);
  } else if (t == 0.0) {
    // Every sum is exactly zero: |0| >= 0 holds. For t > 0 the event is
    // reported as never occurring (the scale t M (alpha p)^{1/2} collapses).
    std::fill(hit.begin(), hit.end(), 1);
  }
  std::size_t count = 0;
  for (auto h : hit) count += h;
  const double q = static_cast<double>(count) / static_cast<double>(trials);
  const double se = std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
  const double bound = 2.0 * std::exp(-t * t / 4.0);
  return {"lazy_hoeffding",
          {{"p", p}, {"alpha", alpha}, {"M", m_bound}, {"t", t}, {"trials", trials}, {"seed", seed}},
          q,
          bound,
          se,
          q <= bound + 3.0 * se};
}

double sparse_hadamard_norm(std::size_t p, double alpha, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::vector<OffDiagEntry> entries;
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (unit(rng) < alpha) {
        const double a = entry(rng);
        if (a != 0.0)
          entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), a});
      }
  const SymCsr m =
      make_sym_csr(p, entries.data(), entries.size(), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p)));
  return operator_norm(m, Exec::serial);
}

nlohmann::json OpnormScaling::to_json(double alpha, std::size_t trials, std::uint64_t seed) const {
  return {{"experiment", "sparse_opnorm_scaling"},
          {"params", {{"p_list", p_list}, {"alpha", alpha}, {"trials", trials}, {"seed", seed}}},
          {"empirical", mean_ratio},
          {"stderr", stderr_ratio},
          {"max_drift", max_drift},
          {"endpoint_drift", endpoint_drift},
          {"bound", 0.25},
          {"pass", pass}};
}

OpnormScaling sparse_opnorm_scaling(const std::vector<std::size_t>& p_list, double alpha,
                                    std::size_t trials, std::uint64_t seed, Exec exec) {
  if (p_list.empty()) throw Error(ErrorKind::invalid_input, "p_list must be nonempty");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::invalid_input, "alpha must be in [0,1]");
  if (trials == 0) throw Error(ErrorKind::invalid_input, "trials must be >= 1");
  OpnormScaling out{p_list, {}, {}, 0.0, 0.0, true};
  for (std::size_t p : p_list) {
    std::vector<double> ratio(trials, 0.0);
    const double scale = std::sqrt(alpha * static_cast<double>(p));
    kernels::for_each_index(
        trials,
        [&](std::size_t r) {
          const double norm = sparse_hadamard_norm(p, alpha, derive_seed(derive_seed(seed, p), r));
          ratio[r] = scale > 0.0 ? norm / scale : 0.0;
        },
        exec);
    double mean = 0.0;
    for (double v : ratio) mean += v;
    mean /= static_cast<double>(trials);
    double var = 0.0;
    for (double v : ratio) var += (v - mean) * (v - mean);
    var = trials > 1 ? var / static_cast<double>(trials - 1) : 0.0;
    out.mean_ratio.push_back(mean);
    out.stderr_ratio.push_back(std::sqrt(var / static_cast<double>(trials)));
  }
  auto drift = [](double a, double b) { return a > 0.0 ? std::abs(b / a - 1.0) : (b > 0.0 ? 1e300 : 0.0); };
  for (std::size_t k = 0; k + 1 < out.mean_ratio.size(); ++k)
    out.max_drift = std::max(out.max_drift, drift(out.mean_ratio[k], out.mean_ratio[k + 1]));
  out.endpoint_drift = drift(out.mean_ratio.front(), out.mean_ratio.back());
  out.pass = out.max_drift < 0.25 && out.endpoint_drift < 0.25;
  return out;
}

nlohmann::json ShrinkRatioReport::to_json(const GraphSpec& model, double noise_scale,
                                          std::size_t trials, std::uint64_t seed) const {
  auto value = [](double r) { return std::isfinite(r) ? nlohmann::json(r) : nlohmann::json(nullptr); };
  nlohmann::json empirical = degenerate ? nlohmann::json(nullptr)
                                        : nlohmann::json{{"identity", value(ratio_identity)},
                                                         {"truth", value(ratio_truth)}};
  return {{"experiment", "shrink_ratio"},
          {"params",
           {{"model", model.to_json()}, {"gamma", gamma}, {"s", s}, {"noise_scale", noise_scale},
            {"trials", trials}, {"seed", seed}, {"kappa_ok", kappa_ok}}},
          {"empirical", empirical},
          {"bound", expected},
          {"tolerance", 0.1},
          {"degenerate", degenerate},
          {"pass", pass}};
}

ShrinkRatioReport shrink_ratio_experiment(const GraphModel& model, double gamma, int s,
                                          double noise_scale, std::size_t trials,
                                          std::uint64_t seed, Exec exec) {
  if (!(gamma > 1.0)) throw Error(ErrorKind::invalid_input, "gamma must be > 1");
  if (s < 0) throw Error(ErrorKind::invalid_input, "s must be >= 0");
  if (trials == 0) throw Error(ErrorKind::invalid_input, "trials must be >= 1");
  const std::size_t p = model.dim();
  const double rate_s = std::pow(gamma, -static_cast<double>(s));
  const double rate_s1 = std::pow(gamma, -static_cast<double>(s + 1));

  std::vector<OffDiagEntry> truth_entries;
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (model.omega(i, j) != 0.0)
        truth_entries.push_back(
            {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), model.omega(i, j)});
  const Eigen::VectorXd zero_diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));

  struct Norms {
    double id_s, id_s1, tr_s, tr_s1;
  };
  std::vector<Norms> norms(trials);
  kernels::for_each_index(
      trials,
      [&](std::size_t r) {
        Rng rng = make_rng(seed, r);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_real_distribution<double> noise(-noise_scale, noise_scale);
        std::vector<OffDiagEntry> noise_s, noise_s1;
        for (std::size_t j = 0; j < p; ++j)
          for (std::size_t i = 0; i < j; ++i) {
            if (model.omega(i, j) != 0.0) continue;
            const double u = unit(rng);
            if (u >= rate_s) continue;
            const double e = noise(rng);
            const OffDiagEntry en{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), e};
            noise_s.push_back(en);
            if (u < rate_s1) noise_s1.push_back(en);
          }
        auto norm_of = [&](const std::vector<OffDiagEntry>& a, bool with_truth) {
          std::vector<OffDiagEntry> all = a;
          if (with_truth) all.insert(all.end(), truth_entries.begin(), truth_entries.end());
          return operator_norm(make_sym_csr(p, all.data(), all.size(), zero_diag), Exec::serial);
        };
        norms[r] = {norm_of(noise_s, true), norm_of(noise_s1, true), norm_of(noise_s, false),
                    norm_of(noise_s1, false)};
      },
      exec);

  ShrinkRatioReport rep{};
  rep.gamma = gamma;
  rep.s = s;
  rep.expected = std::pow(gamma, -0.5);
  for (const auto& n : norms) {
    rep.mean_identity_s += n.id_s;
    rep.mean_identity_s1 += n.id_s1;
    rep.mean_truth_s += n.tr_s;
    rep.mean_truth_s1 += n.tr_s1;
  }
  const double inv = 1.0 / static_cast<double>(trials);
  rep.mean_identity_s *= inv;
  rep.mean_identity_s1 *= inv;
  rep.mean_truth_s *= inv;
  rep.mean_truth_s1 *= inv;
  rep.kappa_ok = static_cast<double>(model.max_row_nonzeros()) <= std::sqrt(static_cast<double>(p));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.degenerate = rep.mean_identity_s == 0.0;
  rep.ratio_identity = rep.degenerate ? nan : rep.mean_identity_s1 / rep.mean_identity_s;
  rep.ratio_truth = rep.mean_truth_s == 0.0 ? nan : rep.mean_truth_s1 / rep.mean_truth_s;
  auto within = [&](double r) { return std::isfinite(r) && std::abs(r / rep.expected - 1.0) <= 0.1; };
  rep.pass = within(rep.ratio_identity) && within(rep.ratio_truth);
  return rep;
}

}  // namespace sprec
