#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "spacelike/battery.hpp"
#include "spacelike/bernstein.hpp"
#include "spacelike/geometry.hpp"
#include "spacelike/grassmann.hpp"
#include "spacelike/jet.hpp"
#include "spacelike/lagrangian.hpp"
#include "spacelike/solver.hpp"

using namespace spacelike;

static void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse("0.3*x1^3 - sin(x2)*exp(0.1*x1) + sqrt(1 + x1^2 + x2^2)", 2));
}
BENCHMARK(BM_Parse);

static void BM_Jet3(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Expr e = parse(hyperboloid_text(m), m);
  const std::vector<double> x(m, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_jet(e, x));
}
BENCHMARK(BM_Jet3)->Arg(2)->Arg(4)->Arg(8);

static void BM_Curvature(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const GraphCase g = random_polynomial_graph(rng, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(curvature(g.map, g.point));
}
BENCHMARK(BM_Curvature)->Args({2, 1})->Args({3, 2});

static void BM_CovariantH(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const GraphCase g = random_polynomial_graph(rng, 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(covariant_h(g.map, g.point));
}
BENCHMARK(BM_CovariantH);

static void BM_GrassmannDistance(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0)), n = static_cast<int>(state.range(1));
  const auto p = SpacelikePlane::from_slope(Eigen::MatrixXd::Constant(n, m, 0.2 / m));
  const auto q = SpacelikePlane::from_slope(Eigen::MatrixXd::Constant(n, m, -0.3 / m));
  for (auto _ : state) benchmark::DoNotOptimize(distance(p, q));
}
BENCHMARK(BM_GrassmannDistance)->Args({2, 1})->Args({4, 3});

static void BM_ModuliCurvature(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const PotentialCase q = random_convex_quartic(rng, 2);
  for (auto _ : state) benchmark::DoNotOptimize(moduli_curvature(q.potential, q.point));
}
BENCHMARK(BM_ModuliCurvature);

static void BM_SolveMaximal(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const Lattice lat({-1, -1}, {1, 1}, {h, h});
  const Expr b = parse("0.3*x1 + 0.1*sin(x2)", 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_maximal(lat, b));
}
BENCHMARK(BM_SolveMaximal)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_GeodesicRadius(benchmark::State& state) {
  const GraphMap map = GraphMap::parse(2, {hyperboloid_text(2)});
  const double h = 1.0 / static_cast<double>(state.range(0));
  const Lattice lat({-1, -1}, {1, 1}, {h, h});
  for (auto _ : state) benchmark::DoNotOptimize(geodesic_radius(map, lat, std::vector<double>{0, 0}));
}
BENCHMARK(BM_GeodesicRadius)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
