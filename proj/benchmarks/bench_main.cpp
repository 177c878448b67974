#include <benchmark/benchmark.h>

#include <random>

#include "bvol/autgroup.hpp"
#include "bvol/metrics.hpp"

using namespace bvol;

static void BM_CanonicalQR(benchmark::State& state) {
  const auto dim = state.range(0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  CMatrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  const SLMatrix sl(a);
  for (auto _ : state) {
    auto f = canonical_qr(sl);
    benchmark::DoNotOptimize(f.q.data());
  }
}
BENCHMARK(BM_CanonicalQR)->Arg(2)->Arg(6)->Arg(20);

static void BM_InducedMatrix(benchmark::State& state) {
  const auto basis = build_basis(2, static_cast<int>(state.range(0)));
  const auto gamma = unipotent_gamma(7, 2);
  for (auto _ : state) {
    auto a = induced_section_matrix(gamma, basis);
    benchmark::DoNotOptimize(a.matrix.data());
  }
}
BENCHMARK(BM_InducedMatrix)->Arg(1)->Arg(3)->Arg(5);

static void BM_SampleFS(benchmark::State& state) {
  QuadratureSpec q;
  q.sample_count = 10000;
  q.method = static_cast<QuadratureMethod>(state.range(0));
  for (auto _ : state) {
    auto pts = sample_fs(1, q);
    benchmark::DoNotOptimize(pts.data());
  }
}
BENCHMARK(BM_SampleFS)->Arg(0)->Arg(1)->Arg(2);

static void BM_Gram(benchmark::State& state) {
  const BasisShape shape{1, static_cast<int>(state.range(0))};
  const auto point = BergmanPoint::identity(shape);
  QuadratureSpec q;
  q.sample_count = 2000;
  const auto samples = SampleSet::fubini_study(1, q);
  for (auto _ : state) {
    auto g = gram(point, MetricKind::calabi, samples);
    benchmark::DoNotOptimize(g.entries.data());
  }
}
BENCHMARK(BM_Gram)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
