#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "sprec/error.hpp"
#include "sprec/metrics.hpp"
#include "sprec/pipeline.hpp"
#include "sprec/rng.hpp"
#include "sprec/synthdata.hpp"

using namespace sprec;

namespace {

SupportMask tri4() { return make_tridiagonal(4).truth(); }

SupportMask permuted(const SupportMask& m, const std::vector<std::size_t>& perm) {
  SupportMask out(m.dim());
  for (const auto& [i, j] : m.pairs()) out.set(perm[i], perm[j], true);
  return out;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("support_of examples") {
    CHECK(support_of(SymMatrix::identity(6)).count() == 0);
    CHECK(support_of(make_tridiagonal(4).omega).count() == 3);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
    m(0, 2) = m(2, 0) = 1e-12;
    CHECK(support_of(SymMatrix(m), 1e-10).count() == 0);
    CHECK(support_of(SymMatrix(m)).count() == 1);
  }

  TEST_CASE("fp_rate examples") {
    const auto t = tri4();
    CHECK(fp_rate(t, t) == 0.0);
    SupportMask all(4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) all.set(i, j, true);
    CHECK(fp_rate(all, t) == 1.0);
    auto extra = t;
    extra.set(0, 2, true);
    CHECK(fp_rate(extra, t) == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(fp_rate(t, all), Error);
  }

  TEST_CASE("tp_rate examples") {
    const auto t = tri4();
    CHECK(tp_rate(t, t) == 1.0);
    CHECK(tp_rate(SupportMask(4), t) == 0.0);
    SupportMask two(4);
    two.set(0, 1, true);
    two.set(1, 2, true);
    CHECK(tp_rate(two, t) == doctest::Approx(2.0 / 3.0));
    try {
      tp_rate(t, SupportMask(4));
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::undefined_rate);
    }
  }

  TEST_CASE("roc table examples") {
    const auto t = tri4();
    auto perfect = roc_table({{0.25, t, t}});
    REQUIRE(perfect.size() == 1);
    CHECK(perfect[0].empirical_fpr == 0.0);
    CHECK(perfect[0].empirical_tpr == 1.0);

    auto extra = t;
    extra.set(0, 2, true);
    SupportMask two(4);
    two.set(0, 1, true);
    two.set(1, 2, true);
    const auto table = roc_table({{0.125, two, t}, {0.5, extra, t}, {0.25, t, t}});
    CHECK(table[0].target_alpha == 0.5);
    CHECK(table[0].empirical_fpr == doctest::Approx(1.0 / 3.0));
    CHECK(table[1].empirical_fpr == 0.0);
    CHECK(table[2].empirical_tpr == doctest::Approx(2.0 / 3.0));
    CHECK(roc_csv(table) ==
          "alpha,fpr,tpr,fp,tp,neg,pos\n"
          "0.5,0.3333333333333333,1,1,3,3,3\n"
          "0.25,0,1,0,3,3,3\n"
          "0.125,0,0.6666666666666666,0,2,3,3\n");
    const auto j = roc_json(table);
    CHECK(j[0]["alpha"] == 0.5);
    CHECK(j[0]["fpr"] == table[0].empirical_fpr);
    CHECK(j[2]["pos"] == 3);
  }

  TEST_CASE("property: rates invariant under permutation") {
    gen::Rng rng(61);
    for (int rep = 0; rep < 50; ++rep) {
      const std::size_t p = 4 + rep % 20;
      SupportMask truth(p), est(p);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j) {
          truth.set(i, j, gen::uniform(rng, 0, 1) < 0.2);
          est.set(i, j, gen::uniform(rng, 0, 1) < 0.3);
        }
      truth.set(0, 1, true);
      truth.set(0, 2, false);
      std::vector<std::size_t> perm(p);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      CHECK(fp_rate(est, truth) == fp_rate(permuted(est, perm), permuted(truth, perm)));
      CHECK(tp_rate(est, truth) == tp_rate(permuted(est, perm), permuted(truth, perm)));
    }
  }

  TEST_CASE("property: pipeline rates nonincreasing along the trace, TPR >= FPR") {
    const auto model = make_tridiagonal(100);
    const Sampler sampler(model);
    const auto truth = model.truth();
    std::vector<double> fpr(7, 0.0), tpr(7, 0.0);
    for (int r = 0; r < 20; ++r) {
      const auto x = sampler.sample(50, derive_seed(5150, r), Distribution::gaussian).x;
      const auto res = run_pipeline(x, {}, 2.0, 6);
      for (int s = 0; s <= 6; ++s) {
        const auto est = support_of(res.trace.iterate(s));
        fpr[s] += fp_rate(est, truth) / 20;
        tpr[s] += tp_rate(est, truth) / 20;
        if (s > 0) {
          const auto prev = support_of(res.trace.iterate(s - 1));
          CHECK(fp_rate(est, truth) <= fp_rate(prev, truth));
          CHECK(tp_rate(est, truth) <= tp_rate(prev, truth));
        }
      }
    }
    for (int s = 2; s <= 6; ++s) CHECK(tpr[s] >= fpr[s]);
  }
}
