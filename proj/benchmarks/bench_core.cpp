#include <benchmark/benchmark.h>

#include <random>

#include "hmono/cost.hpp"
#include "hmono/estimates.hpp"
#include "hmono/green.hpp"
#include "hmono/ot_solver.hpp"
#include "hmono/zoo.hpp"

namespace {

hmono::PointCloud random_cloud(int n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  hmono::PointCloud out(count, hmono::Vector(n));
  for (auto& p : out) {
    for (int i = 0; i < n; ++i) p(i) = u(rng);
  }
  return out;
}

void BM_SolveExact(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const auto cost = hmono::CostFunction::isotropic(2, 3.0);
  const auto xs = random_cloud(2, size, 1);
  const auto ys = random_cloud(2, size, 2);
  for (auto _ : state) benchmark::DoNotOptimize(hmono::solve_exact(xs, ys, cost));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveExact)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_SolveBruteforce(benchmark::State& state) {
  const auto cost = hmono::CostFunction::isotropic(2, 2.0);
  const auto xs = random_cloud(2, 8, 3);
  const auto ys = random_cloud(2, 8, 4);
  for (auto _ : state) benchmark::DoNotOptimize(hmono::solve_bruteforce(xs, ys, cost));
}
BENCHMARK(BM_SolveBruteforce);

void BM_AMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double p = static_cast<double>(state.range(1));
  const auto cost = hmono::CostFunction::isotropic(n, p);
  const auto pts = random_cloud(n, 4, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hmono::a_matrix(cost, pts[0], pts[1], pts[2], pts[3]));
  }
}
BENCHMARK(BM_AMatrix)->Args({2, 2})->Args({2, 3})->Args({3, 3})->Args({3, 4});

void BM_LpMass(benchmark::State& state) {
  const auto budget = static_cast<std::size_t>(state.range(0));
  const auto cost = hmono::CostFunction::isotropic(3, 2.0);
  hmono::ZooSpec spec;
  spec.name = "grad_quartic";
  spec.dimension = 3;
  const auto map = hmono::analytic_zoo(spec);
  const hmono::Ball ball{hmono::Vector::Zero(3), 1.0, 0};
  for (auto _ : state) benchmark::DoNotOptimize(hmono::lp_mass(map, cost, ball, budget));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(budget));
}
BENCHMARK(BM_LpMass)->Arg(10000)->Arg(100000);

void BM_GreenResidual(benchmark::State& state) {
  const auto f = hmono::TestFunction::gaussian();
  hmono::Vector y = hmono::Vector::Zero(3);
  y(0) = 0.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hmono::identity_residual(f, 3, y, 0.5, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_GreenResidual)->Arg(128)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
