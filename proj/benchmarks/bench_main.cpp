#include "metdisc/discrepancy.hpp"
#include "metdisc/energy.hpp"
#include "metdisc/invariance.hpp"
#include "metdisc/partition.hpp"
#include "metdisc/spaces.hpp"

#include <benchmark/benchmark.h>

using namespace metdisc;

namespace {

void BM_CubePartition(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto N = static_cast<std::size_t>(state.range(1));
  const Density nu = Density::power(d, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_cube_partition(nu, N));
}
BENCHMARK(BM_CubePartition)->Args({1, 64})->Args({2, 64})->Args({3, 64})->Args({2, 256})->Unit(benchmark::kMillisecond);

void BM_SampleOmegaSphere2(benchmark::State& state) {
  const Chart chart = builtin_chart("sphere2");
  const auto R = pushforward_partition(chart, build_cube_partition(*chart.nu, state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_omega(R, seed++));
}
BENCHMARK(BM_SampleOmegaSphere2)->Arg(24)->Arg(256);

void BM_PairSumChordal(benchmark::State& state) {
  const auto space = SpaceDescriptor::sphere(2, SphereMetric::chordal);
  const PointSet pts = sample_mu(space, 1, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pair_sum(pts, MetricSelector::chordal(), space));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PairSumChordal)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oNSquared);

void BM_SdmNaturalPair(benchmark::State& state) {
  const auto space = SpaceDescriptor::sphere(2);
  const auto xi = RadialMeasure::natural();
  const PointSet pts = sample_mu(space, 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(sdm_xi_direct(space, xi, pts[0], pts[1]));
}
BENCHMARK(BM_SdmNaturalPair);

void BM_QuadDiscXiSphere2(benchmark::State& state) {
  const auto space = SpaceDescriptor::sphere(2);
  const auto xi = RadialMeasure::natural();
  const PointSet pts = sample_mu(space, 3, state.range(0));
  DiscOptions opts;
  opts.n_outer = 2000;
  for (auto _ : state) benchmark::DoNotOptimize(quad_disc_xi(space, pts, xi, opts));
}
BENCHMARK(BM_QuadDiscXiSphere2)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_InvarianceExactHamming(benchmark::State& state) {
  const auto space = SpaceDescriptor::finite(hamming_space(static_cast<int>(state.range(0))), "hamming");
  const auto xi = RadialMeasure::counting(space.finite_space().radii());
  const PointSet pts = sample_mu(space, 4, 8);
  for (auto _ : state) benchmark::DoNotOptimize(check_invariance_exact(space, xi, pts, true));
}
BENCHMARK(BM_InvarianceExactHamming)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
