#include <benchmark/benchmark.h>

#include "sessile/competitor.hpp"
#include "sessile/io.hpp"
#include "sessile/odesolve.hpp"
#include "sessile/reduced.hpp"
#include "sessile/wulff.hpp"

using namespace sessile;

namespace {

Profile test_profile(int n) {
  Profile p;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    p.t.push_back(t);
    p.r.push_back(1.0 - 0.9 * t * t);
  }
  return p;
}

}  // namespace

static void BM_WulffBody(benchmark::State& st) {
  const SurfaceTension f = preset("pnorm3-l3");
  for (auto _ : st) benchmark::DoNotOptimize(build_wulff_body(f, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_WulffBody)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_ReducedEnergy(benchmark::State& st) {
  const DropModel m(preset("pnorm3-l2"), -0.4, 1024);
  const Profile p = test_profile(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reduced_energy(m, p));
}
BENCHMARK(BM_ReducedEnergy)->Arg(64)->Arg(256)->Arg(1024);

static void BM_EnergyGradient(benchmark::State& st) {
  const DropModel m(preset("pnorm3-l2"), -0.4, 1024);
  const Profile p = test_profile(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(energy_gradient(m, p));
}
BENCHMARK(BM_EnergyGradient)->Arg(64)->Arg(256)->Arg(1024);

static void BM_Shoot(benchmark::State& st) {
  const DropModel m(preset(st.range(0) ? "pnorm3-l3" : "euclid"), -0.5, 1024);
  for (auto _ : st) benchmark::DoNotOptimize(shoot(m, 1.0));
}
BENCHMARK(BM_Shoot)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_MinimizeDirect(benchmark::State& st) {
  const DropModel m(SurfaceTension(), -0.5, 1024);
  DirectOptions o;
  o.grid_size = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(minimize_direct(m, 1.0, o));
}
BENCHMARK(BM_MinimizeDirect)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_RepairOnce(benchmark::State& st) {
  const DropModel m(SurfaceTension(), -0.5, 1024);
  Profile p = test_profile(100);
  p.r[40] -= 0.05;
  for (auto _ : st) benchmark::DoNotOptimize(repair_once(m, p));
}
BENCHMARK(BM_RepairOnce)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
