#include <benchmark/benchmark.h>

#include "habitat/fem.hpp"
#include "habitat/mesh.hpp"
#include "habitat/oracle.hpp"
#include "habitat/scenario_library.hpp"
#include "habitat/spectral.hpp"

namespace {

void BM_BuildMesh(benchmark::State& state) {
    const auto s = habitat::scenario_by_name("seasonal-optimum");
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(habitat::build_mesh(s, n, n));
}
BENCHMARK(BM_BuildMesh)->Arg(32)->Arg(64);

void BM_Assemble(benchmark::State& state) {
    const auto s = habitat::scenario_by_name("seasonal-optimum");
    const int n = static_cast<int>(state.range(0));
    const auto mesh = habitat::build_mesh(s, n, n);
    const auto space = habitat::P2Space::build(mesh);
    for (auto _ : state) benchmark::DoNotOptimize(habitat::assemble(mesh, space, s));
}
BENCHMARK(BM_Assemble)->Arg(16)->Arg(32)->Arg(64);

void BM_Solve(benchmark::State& state) {
    const auto s = habitat::scenario_by_name("seasonal-optimum");
    const int n = static_cast<int>(state.range(0));
    const auto mesh = habitat::build_mesh(s, n, n);
    for (auto _ : state) benchmark::DoNotOptimize(habitat::solve(mesh, s));
}
BENCHMARK(BM_Solve)->Arg(16)->Arg(32);

void BM_Floquet(benchmark::State& state) {
    const auto s = habitat::scenario_by_name("phase-diagram");
    habitat::FloquetOptions fo;
    fo.ny = static_cast<int>(state.range(0));
    fo.steps_per_period = 500;
    fo.richardson = false;
    fo.keep_phi = false;
    for (auto _ : state) benchmark::DoNotOptimize(habitat::floquet_lambda(s, 1.5, fo));
}
BENCHMARK(BM_Floquet)->Arg(101)->Arg(201)->Arg(401);

void BM_OracleStep(benchmark::State& state) {
    auto s = habitat::scenario_by_name("sublinear-shift-left");
    s.horizon = 1.0;
    habitat::OracleOptions oo;
    oo.ny = static_cast<int>(state.range(0));
    oo.tau = 1e-3;
    oo.horizon = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(habitat::step_solver(s, oo));
}
BENCHMARK(BM_OracleStep)->Arg(200)->Arg(400);

} // namespace

BENCHMARK_MAIN();
