#include <benchmark/benchmark.h>

#include <random>

#include "nsdp/driver.hpp"
#include "nsdp/matfun.hpp"
#include "nsdp/penalty.hpp"
#include "nsdp/problems.hpp"
#include "nsdp/trust_region.hpp"

namespace {

using namespace nsdp;

SymMatrix random_sym(std::mt19937_64& rng, Index d) {
  std::normal_distribution<double> nd;
  Mat a(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) a(i, j) = nd(rng);
  }
  return SymMatrix(0.5 * (a + a.transpose()));
}

void BM_DqApply(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Index d = state.range(0);
  const SymMatrix x = random_sym(rng, d);
  const SymMatrix h = random_sym(rng, d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dq_apply(dq_at(x), h));
  }
}
BENCHMARK(BM_DqApply)->Arg(2)->Arg(5)->Arg(10)->Arg(20);

void BM_PenaltyHess(benchmark::State& state) {
  const NsdpProblem& p = get_problem("nearest-psd").problem;
  const PenaltyParams q = special_params(PenaltyKind::ScriptF, 1e3, p.m(), p.d());
  const Vec x{{0.3, 0.8, -0.2}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(penalty_hess(p, x, q));
  }
}
BENCHMARK(BM_PenaltyHess);

void BM_MsSubproblem(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Index n = state.range(0);
  const Mat b = random_sym(rng, n).matrix();
  std::normal_distribution<double> nd;
  Vec g(n);
  for (Index i = 0; i < n; ++i) g[i] = nd(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ms_subproblem(b, g, 0.5));
  }
}
BENCHMARK(BM_MsSubproblem)->Arg(2)->Arg(5)->Arg(10);

void BM_SolveCorpus(benchmark::State& state) {
  const std::vector<std::string> names = list_problems();
  const NsdpProblem& p = get_problem(names[static_cast<std::size_t>(state.range(0))]).problem;
  state.SetLabel(p.name());
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(p, PenaltyConfig{}));
  }
}
BENCHMARK(BM_SolveCorpus)->DenseRange(0, 3);

}  // namespace

BENCHMARK_MAIN();
