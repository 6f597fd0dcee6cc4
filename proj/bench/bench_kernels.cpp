// Serial vs parallel timings for the hot kernels.
//   sprec_bench [p] [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include "sprec/kernels.hpp"
#include "sprec/matrix.hpp"

using namespace sprec;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-16s %12.3f %12.3f %8.2fx\n", name, serial * 1e3, parallel * 1e3, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t p = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 2000;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 5;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  std::vector<OffDiagEntry> entries;
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (u(rng) > 0.98) entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), u(rng)});
  const auto csr = make_sym_csr(p, entries.data(), entries.size(), Eigen::VectorXd::Ones(static_cast<Eigen::Index>(p)));

  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd dense(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) dense(i, j) = dense(j, i) = u(rng);
  Eigen::MatrixXd data(50, n);
  for (Eigen::Index k = 0; k < data.size(); ++k) data.data()[k] = u(rng);
  Eigen::VectorXd x(n), y;
  for (Eigen::Index k = 0; k < n; ++k) x[k] = u(rng);
  const SymMatrix sym(dense);

  std::printf("p=%zu threads=%d csr_nnz=%zu (ms, best of %d)\n", p, kernels::max_threads(), 2 * entries.size(), reps);
  std::printf("%-16s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");
  auto time_exec = [&](auto&& f) {
    return std::pair{best_of(reps, [&] { f(Exec::serial); }), best_of(reps, [&] { f(Exec::parallel); })};
  };
  auto [a, b] = time_exec([&](Exec e) { for (int k = 0; k < 20; ++k) kernels::csr_matvec(csr, x, y, e); });
  row("csr_matvec x20", a, b);
  std::tie(a, b) = time_exec([&](Exec e) { kernels::dense_matvec(dense, x, y, e); });
  row("dense_matvec", a, b);
  std::tie(a, b) = time_exec([&](Exec e) { (void)kernels::gram(data, true, 50.0, e); });
  row("gram n=50", a, b);
  std::tie(a, b) = time_exec([&](Exec e) { (void)operator_norm(csr, e); });
  row("opnorm csr", a, b);
  std::tie(a, b) = time_exec([&](Exec e) { (void)operator_norm(sym, e); });
  row("opnorm dense", a, b);
  return 0;
}
