#include <benchmark/benchmark.h>

#include <random>

#include "tetimp/flips.hpp"
#include "tetimp/improve.hpp"
#include "tetimp/quality.hpp"
#include "tetimp/rbf_surface.hpp"
#include "tetimp/smoothing.hpp"
#include "tetimp/synthetic.hpp"

using namespace tetimp;

namespace {

TetMesh grid(int n, double amplitude = 0.2) {
  TetMesh mesh = cube_grid(n);
  jiggle(mesh, amplitude, 99);
  return mesh;
}

std::pair<int, int> first_interior_edge(const TetMesh& mesh) {
  for (int a = 0; a < mesh.vertex_count(); ++a)
    for (int b = a + 1; b < mesh.vertex_count(); ++b)
      if (mesh.is_edge(a, b) && !mesh.edge_star(a, b).boundary) return {a, b};
  return {-1, -1};
}

std::vector<Vec3> sphere_points(int n) {
  std::vector<Vec3> pts;
  double ga = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / n;
    double r = std::sqrt(1.0 - z * z);
    pts.emplace_back(r * std::cos(ga * i), r * std::sin(ga * i), z);
  }
  return pts;
}

void BM_Energy(benchmark::State& state) {
  TetMesh mesh = grid(static_cast<int>(state.range(0)));
  EnergyParams prm;
  for (auto _ : state) benchmark::DoNotOptimize(energy(mesh, prm));
  state.SetItemsProcessed(state.iterations() * mesh.tet_count());
}
BENCHMARK(BM_Energy)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_VelocityAssembly(benchmark::State& state) {
  TetMesh mesh = grid(static_cast<int>(state.range(0)));
  EnergyParams prm;
  for (auto _ : state) benchmark::DoNotOptimize(assemble_velocities(mesh, prm));
  state.SetItemsProcessed(state.iterations() * mesh.tet_count());
}
BENCHMARK(BM_VelocityAssembly)
    ->Arg(4)
    ->Arg(8)
    ->Arg(12)
    ->Unit(benchmark::kMicrosecond);

void BM_SmoothToStagnation(benchmark::State& state) {
  TetMesh base = grid(static_cast<int>(state.range(0)));
  GeometryModel model = classify_boundary(base, BoundaryMode::Plc);
  EnergyParams prm;
  IntegratorConfig cfg;
  for (auto _ : state) {
    state.PauseTiming();
    TetMesh mesh = base;
    state.ResumeTiming();
    StepReport rep = integrate(mesh, model, prm, cfg);
    benchmark::DoNotOptimize(rep.accepted);
  }
}
BENCHMARK(BM_SmoothToStagnation)
    ->Arg(4)
    ->Arg(8)
    ->Unit(benchmark::kMillisecond);

void BM_LazyPass(benchmark::State& state) {
  TetMesh base = grid(static_cast<int>(state.range(0)), 0.3);
  FlipCriterion crit;
  for (auto _ : state) {
    state.PauseTiming();
    TetMesh mesh = base;
    state.ResumeTiming();
    benchmark::DoNotOptimize(lazy_pass(mesh, crit, 1));
  }
}
BENCHMARK(BM_LazyPass)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_FlipSearchBacktrack(benchmark::State& state) {
  TetMesh base = grid(5, 0.3);
  auto [a, b] = first_interior_edge(base);
  int level = static_cast<int>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    TetMesh mesh = base;
    state.ResumeTiming();
    FlipSearch search(mesh, a, b);
    search.deny_removal = true;  // forces a full explore-and-undo cycle
    benchmark::DoNotOptimize(flipnm(search, level));
    flipnm_post(search, false);
  }
}
BENCHMARK(BM_FlipSearchBacktrack)->Arg(0)->Arg(1)->Arg(2);

void BM_RbfFit(benchmark::State& state) {
  auto pts = sphere_points(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(RbfSurface::fit(pts, pts).center_count());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RbfFit)
    ->Arg(100)
    ->Arg(200)
    ->Arg(400)
    ->Unit(benchmark::kMillisecond)
    ->Complexity();

void BM_RbfEval(benchmark::State& state) {
  auto pts = sphere_points(static_cast<int>(state.range(0)));
  RbfSurface s = RbfSurface::fit(pts, pts);
  Vec3 q(0.3, -0.2, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(s.eval(q));
}
BENCHMARK(BM_RbfEval)->Arg(100)->Arg(400);

void BM_RbfProject(benchmark::State& state) {
  auto pts = sphere_points(200);
  RbfSurface s = RbfSurface::fit(pts, pts);
  Vec3 q(0.36, -0.24, 1.08);  // radius 1.2
  for (auto _ : state) benchmark::DoNotOptimize(s.project(q).iterations);
}
BENCHMARK(BM_RbfProject);

void BM_Improve(benchmark::State& state) {
  TetMesh base = grid(static_cast<int>(state.range(0)), 0.3);
  ImproveOptions opts;
  opts.theta_lim = 25.0;
  for (auto _ : state) {
    state.PauseTiming();
    TetMesh mesh = base;
    state.ResumeTiming();
    benchmark::DoNotOptimize(improve(mesh, opts).outer_iterations);
  }
}
BENCHMARK(BM_Improve)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_MeshStats(benchmark::State& state) {
  TetMesh mesh = grid(static_cast<int>(state.range(0)));
  EnergyParams prm;
  for (auto _ : state) benchmark::DoNotOptimize(mesh_stats(mesh, prm).n_tets);
  state.SetItemsProcessed(state.iterations() * mesh.tet_count());
}
BENCHMARK(BM_MeshStats)->Arg(8)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
