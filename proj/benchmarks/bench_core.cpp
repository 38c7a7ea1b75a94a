#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "cellcert/certifier.hpp"
#include "cellcert/codec.hpp"
#include "cellcert/frame.hpp"
#include "cellcert/linalg.hpp"
#include "cellcert/rng.hpp"
#include "cellcert/special.hpp"
#include "cellcert/subsets.hpp"

using namespace cellcert;

static void BM_GaussianFill(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto v = gaussian(RngStream{1, 2}, n, 1.0);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_GaussianFill)->Range(1 << 10, 1 << 20);

static void BM_Erf(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-6;
    benchmark::DoNotOptimize(cellcert::erf(x));
  }
}
BENCHMARK(BM_Erf);

static void BM_GaussTailDeep(benchmark::State& state) {
  double x = 3.0;
  for (auto _ : state) {
    x = x >= 30.0 ? 3.0 : x + 1e-5;
    benchmark::DoNotOptimize(gauss_tail(x));
  }
}
BENCHMARK(BM_GaussTailDeep);

static void BM_MinSingularValue(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = 4 * n;
  RngCursor rng(RngStream{3, 0});
  Matrix g(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) g.at(i, j) = rng.gaussian();
  for (auto _ : state) benchmark::DoNotOptimize(min_singular_value(g));
}
BENCHMARK(BM_MinSingularValue)->Arg(8)->Arg(16)->Arg(32);

static void BM_MakeFrame(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto f = make_frame(8, M, RngStream{4, 0});
    benchmark::DoNotOptimize(f.rows().data().data());
  }
}
BENCHMARK(BM_MakeFrame)->Arg(1 << 12)->Arg(1 << 14)->Arg(1 << 16);

static void BM_CellRadius(benchmark::State& state) {
  const int d = 8;
  const int M = static_cast<int>(state.range(0));
  const auto frame = make_frame(d, M, RngStream{5, 0});
  const UnitVector x = UnitVector::axis(d, 0);
  ConstantsConfig cfg;
  const double tau = tau_of(d, M, cfg);
  const auto sel = select_subsets(frame, x, tau, cfg, RngStream{6, 0});
  for (auto _ : state) {
    auto cert = cell_radius(frame, sel, x);
    benchmark::DoNotOptimize(cert.radius);
  }
}
BENCHMARK(BM_CellRadius)->Arg(1 << 12)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

static void BM_EncodeDecode(benchmark::State& state) {
  const int d = 8;
  const int M = static_cast<int>(state.range(0));
  ConstantsConfig cfg;
  RngCursor xrng(RngStream{7, 0});
  const UnitVector x(random_unit(xrng, d));
  for (auto _ : state) {
    const auto e = codec::encode(x, d, M, cfg, RngStream{8, 0});
    const auto r = codec::decode(e);
    benchmark::DoNotOptimize(r.x_hat.coords().data());
  }
}
BENCHMARK(BM_EncodeDecode)->Arg(1 << 12)->Unit(benchmark::kMillisecond);

static void BM_SubsetRankUnrank(benchmark::State& state) {
  RngCursor rng(RngStream{9, 0});
  const auto subset = sample_without_replacement(1 << 16, 90, rng);
  for (auto _ : state) {
    const auto rank = codec::subset_rank(subset);
    auto back = codec::subset_unrank(rank, 1 << 16, 90);
    benchmark::DoNotOptimize(back.data());
  }
}
BENCHMARK(BM_SubsetRankUnrank);

BENCHMARK_MAIN();
