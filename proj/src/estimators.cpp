#include "sprec/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sprec/kernels.hpp"
#include "sprec/stats.hpp"

namespace sprec {

const char* to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::glasso: return "glasso";
    case EstimatorKind::glasso_debiased: return "glasso_debiased";
    case EstimatorKind::ridge: return "ridge";
    case EstimatorKind::ridge_debiased: return "ridge_debiased";
  }
  return "unknown";
}

void GlassoSettings::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorKind::invalid_input, "glasso lambda must be >= 0");
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_input, "glasso tol must be > 0");
  if (max_sweeps < 1) throw Error(ErrorKind::invalid_input, "glasso max_sweeps must be >= 1");
}

CovarianceEstimate empirical_covariance(const Eigen::MatrixXd& x, bool center, Exec exec) {
  if (x.rows() == 0) throw Error(ErrorKind::empty_sample, "covariance of zero samples");
  if (x.cols() == 0) throw Error(ErrorKind::invalid_input, "data has no columns");
  if (!x.allFinite()) throw Error(ErrorKind::invalid_input, "data has non-finite entries");
  auto g = kernels::gram(x, center, static_cast<double>(x.rows()), exec);
  return {SymMatrix(std::move(g)), static_cast<std::size_t>(x.rows()), center};
}

namespace {

struct BlockResult {
  Eigen::MatrixXd theta;
  int sweeps;
  bool converged;
  std::vector<double> objective;
};

double objective_dense(const Eigen::MatrixXd& s, const Eigen::MatrixXd& theta, double lambda) {
  Eigen::LLT<Eigen::MatrixXd> llt(theta);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd l = llt.matrixL();
  if (!(l.diagonal().minCoeff() > 0.0)) return std::numeric_limits<double>::infinity();
  const double logdet = 2.0 * l.diagonal().array().log().sum();
  const double off_l1 = theta.cwiseAbs().sum() - theta.diagonal().cwiseAbs().sum();
  return (s.cwiseProduct(theta)).sum() - logdet + lambda * off_l1;
}

// Block coordinate descent on one connected block, on Theta directly. With
// A = Theta_11 fixed, the column (a, c) = (theta_12, theta_22) minimizes
//   s22 a^T A^{-1} a + 2 s12^T a + 2 lambda |a|_1,  c = 1/s22 + a^T A^{-1} a.
// Its dual is the box QP  min_{|g|_inf <= lambda} (s12 + g)^T A (s12 + g),
// solved by cyclic coordinate descent warm-started from the previous sweep;
// then a = -A (s12 + g) / s22 on the coordinates where |g_k| = lambda. Theta stays PD at every step, which the
// W-based update does not guarantee when S is singular.
BlockResult solve_block(const Eigen::MatrixXd& s, const GlassoSettings& st) {
  const Eigen::Index p = s.rows();
  const double lambda = st.lambda;
  Eigen::MatrixXd theta = Eigen::MatrixXd(s.diagonal().cwiseInverse().asDiagonal());
  Eigen::MatrixXd gam = Eigen::MatrixXd::Zero(p, p);  // column j holds g for column j
  Eigen::VectorXd av(p);                               // A (s12 + g), entry j unused
  BlockResult out{theta, 0, false, {}};
  const double inner_tol = st.tol * 1e-2;

  for (int sweep = 1; sweep <= st.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      auto g = gam.col(j);
      av.setZero();
      for (Eigen::Index l = 0; l < p; ++l) {
        if (l == j) continue;
        const double v = s(l, j) + g[l];
        if (v != 0.0) av.noalias() += theta.col(l) * v;
      }
      av[j] = 0.0;
      for (int pass = 0; pass < 10000; ++pass) {
        double delta = 0.0;
        for (Eigen::Index k = 0; k < p; ++k) {
          if (k == j) continue;
          const double akk = theta(k, k);
          const double ng = std::clamp(g[k] - av[k] / akk, -lambda, lambda);
          const double d = ng - g[k];
          if (d != 0.0) {
            g[k] = ng;
            av.noalias() += theta.col(k) * d;
            delta = std::max(delta, std::abs(d) * akk);
          }
        }
        if (delta < inner_tol) break;
      }
      const double s22 = s(j, j);
      double quad = 0.0;
      for (Eigen::Index k = 0; k < p; ++k)
        if (k != j) quad += (s(k, j) + g[k]) * av[k];
      const double theta_jj = 1.0 / s22 + quad / (s22 * s22);
      for (Eigen::Index k = 0; k < p; ++k) {
        // complementary slackness: a_k = 0 unless g_k sits on the box
        const double v = (k == j) ? theta_jj : (std::abs(g[k]) < lambda ? 0.0 : -av[k] / s22);
        max_change = std::max(max_change, std::abs(v - theta(k, j)));
        theta(k, j) = v;
        theta(j, k) = v;
      }
    }
    out.sweeps = sweep;
    if (st.track_objective) out.objective.push_back(objective_dense(s, theta, lambda));
    if (max_change < st.tol) {
      out.converged = true;
      break;
    }
  }
  out.theta = theta;
  return out;
}

// Connected components of the graph {(i,j): |S_ij| > lambda}.
std::vector<std::vector<Eigen::Index>> screen_components(const Eigen::MatrixXd& s, double lambda) {
  const Eigen::Index p = s.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(p));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (std::abs(s(i, j)) > lambda) {
        const auto a = find(i), b = find(j);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
  std::vector<std::vector<Eigen::Index>> groups;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(p), -1);
  for (Eigen::Index i = 0; i < p; ++i) {
    const auto r = find(i);
    auto& sl = slot[static_cast<std::size_t>(r)];
    if (sl < 0) {
      sl = static_cast<Eigen::Index>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(sl)].push_back(i);
  }
  return groups;
}

// Primal minus dual value, the dual point being Theta^{-1} clipped into the
// box |W_ij - S_ij| <= lambda (W_ii = S_ii). +inf when either side is not PD.
double duality_gap(const Eigen::MatrixXd& s, const Eigen::MatrixXd& theta, double lambda) {
  const double primal = objective_dense(s, theta, lambda);
  if (!std::isfinite(primal)) return primal;
  Eigen::MatrixXd w = theta.llt().solve(Eigen::MatrixXd::Identity(s.rows(), s.cols()));
  for (Eigen::Index j = 0; j < s.cols(); ++j)
    for (Eigen::Index i = 0; i < s.rows(); ++i)
      w(i, j) = i == j ? s(i, i) : s(i, j) + std::clamp(w(i, j) - s(i, j), -lambda, lambda);
  w = 0.5 * (w + w.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(w);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const double logdet = 2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
  return primal - logdet - static_cast<double>(s.rows());
}

}  // namespace

GlassoFit graphical_lasso_fit(const CovarianceEstimate& cov, const GlassoSettings& settings) {
  settings.validate();
  const auto& s = cov.matrix.dense();
  const Eigen::Index p = s.rows();
  for (Eigen::Index i = 0; i < p; ++i)
    if (!(s(i, i) > 0.0))
      throw Error(ErrorKind::degenerate_input,
                  "covariance diagonal " + std::to_string(i) + " is not positive",
                  static_cast<std::size_t>(i), s(i, i));
  if (settings.lambda == 0.0) spd_cholesky(cov.matrix);  // unpenalized MLE needs PD S

  const auto groups = screen_components(s, settings.lambda);
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(p, p);
  GlassoFit fit{PrecisionEstimate{SymMatrix::identity(static_cast<std::size_t>(p)),
                                  EstimatorKind::glasso, settings.lambda, false},
                0, groups.size(), {}};
  std::vector<std::vector<double>> objectives;
  for (const auto& g : groups) {
    const auto m = static_cast<Eigen::Index>(g.size());
    if (m == 1) {
      theta(g[0], g[0]) = 1.0 / s(g[0], g[0]);
      continue;
    }
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b)
        sub(a, b) = s(g[static_cast<std::size_t>(a)], g[static_cast<std::size_t>(b)]);
    auto res = solve_block(sub, settings);
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b)
        theta(g[static_cast<std::size_t>(a)], g[static_cast<std::size_t>(b)]) = res.theta(a, b);
    fit.sweeps = std::max(fit.sweeps, res.sweeps);
    if (!res.converged) {
      const double gap = duality_gap(sub, res.theta, settings.lambda);
      throw Error(ErrorKind::convergence,
                  "graphical lasso did not converge in " + std::to_string(settings.max_sweeps) +
                      " sweeps (duality gap " + std::to_string(gap) + ")",
                  std::nullopt, gap);
    }
    if (settings.track_objective) objectives.push_back(std::move(res.objective));
  }
  fit.estimate.matrix = SymMatrix::symmetrize(theta);
  if (settings.track_objective) {
    // Whole-matrix objective per sweep: blocks decouple, so sum block values
    // (a block that finished early contributes its final value).
    double isolated = 0.0;
    for (const auto& g : groups)
      if (g.size() == 1) isolated += 1.0 + std::log(s(g[0], g[0]));
    for (int k = 0; k < fit.sweeps; ++k) {
      double total = isolated;
      for (const auto& o : objectives)
        if (!o.empty()) total += o[std::min<std::size_t>(static_cast<std::size_t>(k), o.size() - 1)];
      fit.objective.push_back(total);
    }
  }
  return fit;
}

PrecisionEstimate graphical_lasso(const CovarianceEstimate& cov, const GlassoSettings& settings) {
  return graphical_lasso_fit(cov, settings).estimate;
}

double glasso_objective(const SymMatrix& s, const SymMatrix& theta, double lambda) {
  if (s.dim() != theta.dim()) throw Error(ErrorKind::dimension_mismatch, "objective dims differ");
  return objective_dense(s.dense(), theta.dense(), lambda);
}

double glasso_kkt_residual(const SymMatrix& s, const SymMatrix& theta, double lambda) {
  if (s.dim() != theta.dim()) throw Error(ErrorKind::dimension_mismatch, "kkt dims differ");
  const Eigen::MatrixXd w = spd_inverse(theta).dense();
  const auto& sd = s.dense();
  const auto& t = theta.dense();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < t.cols(); ++j)
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      const double g = sd(i, j) - w(i, j);
      double viol;
      if (i == j) viol = std::abs(g);
      else if (t(i, j) != 0.0) viol = std::abs(g + lambda * (t(i, j) > 0 ? 1.0 : -1.0));
      else viol = std::max(0.0, std::abs(g) - lambda);
      worst = std::max(worst, viol);
    }
  return worst;
}

PrecisionEstimate debias_glasso(const PrecisionEstimate& est, const CovarianceEstimate& cov) {
  if (est.matrix.dim() != cov.matrix.dim())
    throw Error(ErrorKind::dimension_mismatch, "estimate and covariance dims differ");
  const auto& o = est.matrix.dense();
  const Eigen::MatrixXd so = cov.matrix.dense() * o;
  Eigen::MatrixXd out = 2.0 * o;
  out.noalias() -= o * so;
  return {SymMatrix::symmetrize(out), EstimatorKind::glasso_debiased, est.lambda, false};
}

PrecisionEstimate ridge_precision(const CovarianceEstimate& cov, double lambda) {
  if (!std::isfinite(lambda)) throw Error(ErrorKind::invalid_input, "ridge lambda must be finite");
  Eigen::MatrixXd shifted = cov.matrix.dense();
  shifted.diagonal().array() += lambda;
  return {spd_inverse(SymMatrix(std::move(shifted))), EstimatorKind::ridge, lambda, false};
}

PrecisionEstimate debias_ridge(const PrecisionEstimate& ridge, const Eigen::MatrixXd& x,
                               const PrecisionEstimate& aux) {
  const auto p = ridge.matrix.dim();
  if (static_cast<std::size_t>(x.cols()) != p || aux.matrix.dim() != p)
    throw Error(ErrorKind::dimension_mismatch, "debias_ridge dims differ");
  if (x.rows() == 0) throw Error(ErrorKind::empty_sample, "debias_ridge needs data");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? 1e-12 * sv.maxCoeff() : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > cutoff) ++rank;
  const Eigen::MatrixXd v = svd.matrixV().leftCols(rank);
  Eigen::MatrixXd proj = v * v.transpose();
  proj.diagonal().setZero();
  Eigen::MatrixXd out = ridge.matrix.dense();
  out.noalias() += proj * aux.matrix.dense();
  return {SymMatrix::symmetrize(out), EstimatorKind::ridge_debiased, ridge.lambda, false};
}

SupportMask jankova_support(const PrecisionEstimate& debiased, const CovarianceEstimate& cov,
                            std::size_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::invalid_input, "alpha must be in (0,1)");
  if (n < 1) throw Error(ErrorKind::invalid_input, "n must be >= 1");
  const auto p = debiased.matrix.dim();
  if (cov.matrix.dim() != p) throw Error(ErrorKind::dimension_mismatch, "threshold comparator dims differ");
  SupportMask mask(p);
  if (p < 2) return mask;
  const double tail = alpha / (static_cast<double>(p) * static_cast<double>(p - 1));
  const double q = stats::normal_upper_quantile(tail);
  const double scale = q / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (std::abs(debiased.matrix(i, j)) >= scale * std::abs(cov.matrix(i, j)) &&
          debiased.matrix(i, j) != 0.0)
        mask.set(i, j, true);
  return mask;
}

}  // namespace sprec
