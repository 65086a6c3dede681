#include <benchmark/benchmark.h>

#include "quadric/batch.hpp"
#include "quadric/fit.hpp"
#include "quadric/quadric.hpp"
#include "quadric/residuals.hpp"
#include "quadric/rng.hpp"

using namespace quadric;
using batch::Exec;

namespace {

Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

void BM_main_stats_fd(benchmark::State& state) {
  const SolutionParams sol{2.0, 0.4, Eigen::Vector4d(0, 0, 0, 1), Branch::plus};
  const ScalarField w = sol.field();
  const auto pts = sample_sphere(3, 2000, SampleStrategy::uniform_random, 1);
  const EvalOptions fd{DerivPath::finite_difference, {1e-4, 1e-3}};
  for (auto _ : state) {
    const SystemStats stats = stats_main(w, pts, sol.c2, fd, exec_of(state));
    benchmark::DoNotOptimize(stats.max_norm);
  }
}

void BM_cloud_generation(benchmark::State& state) {
  QuadricParams q;
  q.kind = QuadricKind::hyperboloid_sheet;
  q.f = 1.0;
  q.eps = 1.5;
  q.axis = Eigen::Vector3d(0, 0, 1);
  for (auto _ : state) {
    const auto cloud = sample_surface(q, 50000, 7, exec_of(state));
    benchmark::DoNotOptimize(cloud.data());
  }
}

void BM_pairwise_sum(benchmark::State& state) {
  SplitMix64 rng(3);
  std::vector<double> values(1 << 20);
  for (auto& v : values) v = rng.uniform01() - 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(batch::pairwise_sum(values, exec_of(state)));
  }
}

void BM_fit(benchmark::State& state) {
  QuadricParams q;
  q.kind = QuadricKind::ellipsoid;
  q.f = 1.0;
  q.eps = 0.5;
  q.axis = Eigen::Vector3d(0, 1, 0);
  const auto samples = sample_radial(q, 20000, 11);
  for (auto _ : state) {
    const FitResult fit = fit_inverse_radial(samples, {}, exec_of(state));
    benchmark::DoNotOptimize(fit.rms_residual);
  }
}

}  // namespace

BENCHMARK(BM_main_stats_fd)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cloud_generation)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pairwise_sum)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fit)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
