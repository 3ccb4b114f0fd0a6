#include "asymbif/catalog.hpp"
#include "asymbif/continuation.hpp"
#include "asymbif/detection.hpp"
#include "asymbif/potentials.hpp"
#include "asymbif/reduction.hpp"

#include <benchmark/benchmark.h>

using namespace asymbif;

namespace {

PotentialSpec pt_potential() { return potentials::combine({potentials::poschl_teller(2.0)}, {}); }

struct Pt {
  Operator op;
  Nonlinearity nl = catalog::tanh(0.5);
  ReductionContext ctx;
  explicit Pt(int n) {
    const Operator op0 = build_schrodinger_1d(Grid(15.0, n), pt_potential(), 0.0);
    op = shift_operator(op0, nearest_isolated_eigenvalue(op0, -1.0));
    ctx = configure(spectral_split(op, 0.5), 0.5, 0.5);
  }
};

const Pt& pt(int n) {
  static const Pt p401(401), p601(601);
  return n == 401 ? p401 : p601;
}

void BM_Eigensolve(benchmark::State& state) {
  const Grid grid(15.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_schrodinger_1d(grid, pt_potential(), 0.0));
}
BENCHMARK(BM_Eigensolve)->Arg(401)->Arg(601)->Unit(benchmark::kMillisecond);

void BM_EigenvaluesOnly(benchmark::State& state) {
  const Grid grid(15.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(schrodinger_eigenvalues(grid, pt_potential(), 0.0));
}
BENCHMARK(BM_EigenvaluesOnly)->Arg(601)->Arg(1202)->Unit(benchmark::kMillisecond);

void BM_SolveW(benchmark::State& state) {
  const auto& p = pt(static_cast<int>(state.range(0)));
  const Vector z = Vector::Constant(1, static_cast<double>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_w(p.ctx, p.op, p.nl, 0.1, z));
}
BENCHMARK(BM_SolveW)->Args({401, 20})->Args({601, 20})->Args({601, 1000})->Unit(benchmark::kMicrosecond);

void BM_NewtonConstrained(benchmark::State& state) {
  const auto& p = pt(601);
  const Vector z = Vector::Constant(1, 40.0);
  const auto guess = solve_w(p.ctx, p.op, p.nl, 0.0, z);
  const Vector u0 = guess.w + p.ctx.split.embed(z);
  for (auto _ : state) benchmark::DoNotOptimize(newton_constrained(p.op, p.nl, u0, 0.0, 40.0));
}
BENCHMARK(BM_NewtonConstrained)->Unit(benchmark::kMillisecond);

void BM_TraceBranch(benchmark::State& state) {
  const auto& p = pt(601);
  const Vector dir = Vector::Ones(1);
  for (auto _ : state) benchmark::DoNotOptimize(trace_branch(p.ctx, p.op, p.nl, dir, {10, 20, 40, 80, 160}));
}
BENCHMARK(BM_TraceBranch)->Unit(benchmark::kMillisecond);

void BM_LandesmanLazer(benchmark::State& state) {
  const Operator op = build_synthetic_rotated({-2, 0, 0, 0, 1.5, 3}, EssentialSpectrum::half_line(3), 4);
  const auto split = spectral_split(op, 0.5);
  const Matrix kernel = kernel_basis(split, 0.4);
  const auto nl = catalog::atan(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(landesman_lazer_f5(nl, op.mesh, kernel, default_sphere_samples(3), 1));
  }
}
BENCHMARK(BM_LandesmanLazer)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
