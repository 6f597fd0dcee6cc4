#include <doctest.h>

#include <atomic>

#ifdef SPREC_HAVE_OPENMP
#include <omp.h>
#endif

#include "oracles.hpp"
#include "sprec/error.hpp"
#include "sprec/kernels.hpp"
#include "sprec/pipeline.hpp"
#include "sprec/synthdata.hpp"

using namespace sprec;

namespace {

struct Threads {
  explicit Threads(int n) {
#ifdef SPREC_HAVE_OPENMP
    saved = omp_get_max_threads();
    omp_set_num_threads(n);
#else
    (void)n;
#endif
  }
  ~Threads() {
#ifdef SPREC_HAVE_OPENMP
    omp_set_num_threads(saved);
#endif
  }
  int saved = 1;
};

SymCsr random_csr(gen::Rng& rng, std::size_t p, double density) {
  std::vector<OffDiagEntry> e;
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (gen::uniform(rng, 0, 1) < density)
        e.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), gen::uniform(rng, -1, 1)});
  Eigen::VectorXd d(static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = gen::uniform(rng, -1, 1);
  return make_sym_csr(p, e.data(), e.size(), d);
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("csr matvec: serial == parallel, and matches the dense product") {
    Threads t(4);
    gen::Rng rng(71);
    for (std::size_t p : {1, 7, 130, 513}) {
      const auto a = random_csr(rng, p, 0.1);
      Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
      for (std::size_t r = 0; r < p; ++r) {
        dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = a.diag[static_cast<Eigen::Index>(r)];
        for (auto k = a.row_start[r]; k < a.row_start[r + 1]; ++k)
          dense(static_cast<Eigen::Index>(r), a.col[k]) = a.val[k];
      }
      CHECK(dense == dense.transpose());
      Eigen::VectorXd x(static_cast<Eigen::Index>(p));
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = gen::uniform(rng, -1, 1);
      Eigen::VectorXd ys, yp;
      kernels::csr_matvec(a, x, ys, Exec::serial);
      kernels::csr_matvec(a, x, yp, Exec::parallel);
      CHECK(ys == yp);
      CHECK((ys - dense * x).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("dense matvec and gram: serial == parallel") {
    Threads t(4);
    gen::Rng rng(72);
    for (std::size_t p : {3, 64, 301}) {
      const auto m = gen::symmetric(rng, p, 0.5);
      Eigen::VectorXd x = Eigen::VectorXd::Random(static_cast<Eigen::Index>(p));
      Eigen::VectorXd ys, yp;
      kernels::dense_matvec(m.dense(), x, ys, Exec::serial);
      kernels::dense_matvec(m.dense(), x, yp, Exec::parallel);
      CHECK(ys == yp);
      CHECK((ys - m.dense() * x).cwiseAbs().maxCoeff() < 1e-12);
      const auto data = gen::gaussian_data(rng, 37, p);
      for (bool center : {false, true}) {
        const auto gs = kernels::gram(data, center, 37.0, Exec::serial);
        const auto gp = kernels::gram(data, center, 37.0, Exec::parallel);
        CHECK(gs == gp);
        CHECK(gs == gs.transpose());
      }
    }
  }

  TEST_CASE("for_each_index visits every index and rethrows the lowest failure") {
    Threads t(4);
    for (auto exec : {Exec::serial, Exec::parallel}) {
      std::vector<int> hits(1000, 0);
      kernels::for_each_index(1000, [&](std::size_t i) { hits[i]++; }, exec);
      for (int h : hits) CHECK(h == 1);
      try {
        kernels::for_each_index(
            100,
            [](std::size_t i) {
              if (i == 17 || i == 80) throw Error(ErrorKind::convergence, "fail", i);
            },
            exec);
        FAIL("expected error");
      } catch (const Error& e) {
        CHECK(e.index().value() == 17);
      }
    }
  }

  TEST_CASE("operator norm and full pipeline are thread-count independent") {
    gen::Rng rng(73);
    const auto m = gen::symmetric(rng, 400, 0.05);
    double n1, n4;
    {
      Threads t(1);
      n1 = operator_norm(m, Exec::parallel);
    }
    {
      Threads t(4);
      n4 = operator_norm(m, Exec::parallel);
    }
    CHECK(n1 == n4);
    CHECK(n1 == operator_norm(m, Exec::serial));

    const auto x = Sampler(make_tridiagonal(150)).sample(50, 3, Distribution::gaussian).x;
    PipelineResult a = [&] {
      Threads t(1);
      return run_pipeline(x, {}, 2.0, 5);
    }();
    PipelineResult b = [&] {
      Threads t(4);
      return run_pipeline(x, {}, 2.0, 5);
    }();
    CHECK(a.trace.final.matrix == b.trace.final.matrix);
    CHECK(to_json(a.trace) == to_json(b.trace));
  }
}
