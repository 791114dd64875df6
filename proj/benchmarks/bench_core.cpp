#include <benchmark/benchmark.h>

#include <random>

#include <grasskit/flow.hpp>
#include <grasskit/grassmann.hpp>
#include <grasskit/multivec.hpp>

namespace {

using namespace grasskit;

MultiVector random_mv(int n, int p, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MultiVector v(n, p);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = g(rng);
  return v;
}

// Wedge of a degree-k and a degree-(n/2 - k) p-vector in R^n.
void BM_Wedge(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const MultiVector a = random_mv(n, n / 4, rng);
  const MultiVector b = random_mv(n, n / 2 - n / 4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(wedge(a, b));
}
BENCHMARK(BM_Wedge)->Arg(6)->Arg(8)->Arg(12);

void BM_Plucker(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const GrassPoint P = random_grass_point(n / 2, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(plucker(P.basis()));
}
BENCHMARK(BM_Plucker)->Arg(4)->Arg(8)->Arg(12);

void BM_Dist(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  const GrassPoint P = random_grass_point(n / 2, n, rng);
  const GrassPoint Q = random_grass_point(n / 2, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(dist(P, Q));
}
BENCHMARK(BM_Dist)->Arg(4)->Arg(8)->Arg(16);

void BM_Kozlov(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(4);
  const GrassPoint w = random_grass_point(n / 2, n, rng);
  const Eigen::MatrixXd A = random_unit_coordinates(n / 2, n - n / 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(kozlov_canonical(w, A));
}
BENCHMARK(BM_Kozlov)->Arg(4)->Arg(8)->Arg(16);

void BM_FlowStep(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const DomainMesh mesh = build_torus_mesh(m);
  const auto target = sphere_target(2);
  MapState s = make_state(mesh, *target, cap_winding_map(m, 0.5, 1.2));
  const double tau = default_step(mesh);
  for (auto _ : state) {
    s = flow_step(mesh, *target, s, tau);
    benchmark::DoNotOptimize(s.energy);
  }
  state.SetItemsProcessed(state.iterations() * mesh.vertices());
}
BENCHMARK(BM_FlowStep)->Arg(32)->Arg(64);

}  // namespace
BENCHMARK_MAIN();
