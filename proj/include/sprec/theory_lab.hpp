#pragma once

// Monte Carlo checks of the concentration results behind the gamma^{-1/2}
// radius shrink: a sparse Hoeffding tail, the (alpha p)^{1/2} operator-norm
// scaling of a Bernoulli-masked random matrix, and the per-step norm ratio.
// Tolerances (3 standard errors, 25% drift, +-10% ratio band) are test-design
// choices for finite p.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sprec/kernels.hpp"
#include "sprec/synthdata.hpp"

namespace sprec {

struct TrialReport {
  std::string experiment;
  nlohmann::json params;
  double empirical;
  double bound;
  double stderr_mc;
  bool pass;

  nlohmann::json to_json() const;
};

/// P(|sum_i b_i Z_i| >= t M sqrt(alpha p)) against 2 exp(-t^2/4), with
/// Z_i ~ U[-M, M] and b_i ~ Bernoulli(alpha). Trial r uses stream (seed, r).
TrialReport lazy_hoeffding_tail(std::size_t p, double alpha, double m_bound, double t,
                                std::size_t trials, std::uint64_t seed,
                                Exec exec = Exec::parallel);

struct OpnormScaling {
  std::vector<std::size_t> p_list;
  std::vector<double> mean_ratio;   // mean ||A o B|| / sqrt(alpha p)
  std::vector<double> stderr_ratio;
  double max_drift;                 // largest |r_{k+1}/r_k - 1| over consecutive p
  double endpoint_drift;            // |r_last / r_first - 1|
  bool pass;                        // every drift < 0.25

  nlohmann::json to_json(double alpha, std::size_t trials, std::uint64_t seed) const;
};

/// A symmetric, zero diagonal, U[-1,1] entries; B symmetric Bernoulli(alpha).
/// alpha = 0 yields zero norms and ratio 0.
OpnormScaling sparse_opnorm_scaling(const std::vector<std::size_t>& p_list, double alpha,
                                    std::size_t trials, std::uint64_t seed,
                                    Exec exec = Exec::parallel);

/// One draw of ||A o B|| for the experiment above.
double sparse_hadamard_norm(std::size_t p, double alpha, std::uint64_t seed);

struct ShrinkRatioReport {
  double gamma;
  int s;
  double expected;          // gamma^{-1/2}
  double ratio_identity;    // E||Omega_{s+1} - I|| / E||Omega_s - I||
  double ratio_truth;       // E||Omega_{s+1} - Omega|| / E||Omega_s - Omega||, NaN on 0/0
  double mean_identity_s, mean_identity_s1;
  double mean_truth_s, mean_truth_s1;
  bool degenerate;          // ||Omega_s - I|| == 0 (Omega = I, empty mask): no ratio
  bool kappa_ok;            // max row nonzeros <= p^{1/2}
  bool pass;                // both ratios within +-10% of expected

  nlohmann::json to_json(const GraphSpec& model, double noise_scale, std::size_t trials,
                         std::uint64_t seed) const;
};

/// Omega_s = Omega + B_s o E on the zero cells of Omega, B_s ~ Bernoulli(gamma^{-s})
/// with B_{s+1} nested in B_s (one uniform per cell), E ~ U[-noise, noise].
ShrinkRatioReport shrink_ratio_experiment(const GraphModel& model, double gamma, int s,
                                          double noise_scale, std::size_t trials,
                                          std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace sprec
