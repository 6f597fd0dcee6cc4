#include "sprec/synthdata.hpp"

#include <cmath>
#include <random>

#include "sprec/rng.hpp"

namespace sprec {

const char* to_string(GraphKind kind) noexcept {
  switch (kind) {
    case GraphKind::tridiagonal: return "tridiagonal";
    case GraphKind::binary_tree: return "binary_tree";
    case GraphKind::block_diagonal: return "block_diagonal";
  }
  return "unknown";
}

const char* to_string(Distribution dist) noexcept {
  return dist == Distribution::gaussian ? "gaussian" : "laplace";
}

nlohmann::json GraphSpec::to_json() const {
  nlohmann::json j{{"kind", to_string(kind)}, {"off_value", off_value}};
  switch (kind) {
    case GraphKind::tridiagonal: j["p"] = p; break;
    case GraphKind::binary_tree: j["depth"] = depth; break;
    case GraphKind::block_diagonal:
      j["blocks"] = blocks;
      j["block_size"] = block_size;
      break;
  }
  return j;
}

std::size_t GraphModel::max_row_nonzeros() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < dim(); ++j) c += omega(i, j) != 0.0;
    best = std::max(best, c);
  }
  return best;
}

namespace {

void require_pd(const SymMatrix& omega) {
  try {
    spd_cholesky(omega);
  } catch (const Error& e) {
    throw Error(ErrorKind::model_construction,
                std::string("generated precision matrix is not positive definite: ") + e.what());
  }
}

}  // namespace

GraphModel make_tridiagonal(std::size_t p, double off_value) {
  if (p < 2) throw Error(ErrorKind::invalid_input, "tridiagonal model needs p >= 2");
  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = off_value;
  GraphSpec spec;
  spec.kind = GraphKind::tridiagonal;
  spec.p = p;
  spec.off_value = off_value;
  GraphModel model{spec, SymMatrix(std::move(m))};
  require_pd(model.omega);
  return model;
}

GraphModel make_binary_tree(std::size_t depth, double off_value) {
  if (depth < 2) throw Error(ErrorKind::invalid_input, "binary tree needs depth >= 2");
  const std::size_t p = depth * (depth + 1) / 2;
  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t node = 1; node <= p; ++node)
    for (std::size_t child : {2 * node, 2 * node + 1})
      if (child <= p) {
        const auto a = static_cast<Eigen::Index>(node - 1);
        const auto b = static_cast<Eigen::Index>(child - 1);
        m(a, b) = m(b, a) = off_value;
      }
  GraphSpec spec;
  spec.kind = GraphKind::binary_tree;
  spec.depth = depth;
  spec.p = p;
  spec.off_value = off_value;
  GraphModel model{spec, SymMatrix(std::move(m))};
  require_pd(model.omega);
  return model;
}

GraphModel make_block_diagonal(std::size_t blocks, std::size_t block_size, double off_value) {
  if (blocks < 1) throw Error(ErrorKind::invalid_input, "block model needs blocks >= 1");
  if (block_size < 2) throw Error(ErrorKind::invalid_input, "block model needs block_size >= 2");
  const std::size_t p = blocks * block_size;
  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  const auto bs = static_cast<Eigen::Index>(block_size);
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto o = static_cast<Eigen::Index>(b) * bs;
    for (Eigen::Index i = 0; i < bs; ++i)
      for (Eigen::Index j = 0; j < bs; ++j)
        if (i != j) m(o + i, o + j) = off_value;
  }
  GraphSpec spec;
  spec.kind = GraphKind::block_diagonal;
  spec.blocks = blocks;
  spec.block_size = block_size;
  spec.p = p;
  spec.off_value = off_value;
  GraphModel model{spec, SymMatrix(std::move(m))};
  require_pd(model.omega);
  return model;
}

GraphModel make_model(const GraphSpec& spec) {
  switch (spec.kind) {
    case GraphKind::tridiagonal: return make_tridiagonal(spec.p, spec.off_value);
    case GraphKind::binary_tree: return make_binary_tree(spec.depth, spec.off_value);
    case GraphKind::block_diagonal:
      return make_block_diagonal(spec.blocks, spec.block_size, spec.off_value);
  }
  throw Error(ErrorKind::invalid_input, "unknown graph kind");
}

Sampler::Sampler(const GraphModel& model)
    : spec_(model.spec), chol_(spd_cholesky(spd_inverse(model.omega))) {}

SymMatrix Sampler::sigma() const { return SymMatrix::symmetrize(chol_ * chol_.transpose()); }

SampleSet Sampler::sample(std::size_t n, std::uint64_t seed, Distribution dist, Exec exec) const {
  const auto p = chol_.rows();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), p);
  kernels::for_each_index(
      n,
      [&](std::size_t r) {
        Rng rng = make_rng(seed, r);
        std::normal_distribution<double> normal;
        Eigen::VectorXd z(p);
        for (Eigen::Index c = 0; c < p; ++c) z[c] = normal(rng);
        double scale = 1.0;
        if (dist == Distribution::laplace) {
          std::exponential_distribution<double> expo(1.0);
          scale = std::sqrt(expo(rng));
        }
        const Eigen::VectorXd lz = chol_.triangularView<Eigen::Lower>() * z;
        x.row(static_cast<Eigen::Index>(r)) = (scale * lz).transpose();
      },
      exec);
  return {std::move(x), spec_, dist, seed};
}

SampleSet sample_gaussian(const GraphModel& model, std::size_t n, std::uint64_t seed) {
  return Sampler(model).sample(n, seed, Distribution::gaussian);
}

SampleSet sample_laplace(const GraphModel& model, std::size_t n, std::uint64_t seed) {
  return Sampler(model).sample(n, seed, Distribution::laplace);
}

}  // namespace sprec
