#include <benchmark/benchmark.h>

#include "cbm/integrate.hpp"
#include "cbm/scenarios.hpp"

namespace {

using namespace cbm;

std::vector<double> spheroid(int n) {
  const CellPopulation pop = setup_population(division_in_spheroid(n, 7));
  return {pop.positions().begin(), pop.positions().end()};
}

void BM_Force(benchmark::State& state) {
  const auto x = spheroid(static_cast<int>(state.range(0)));
  CellForceModel model(ForceLaw{}, 3);
  std::vector<double> f(x.size());
  for (auto _ : state) {
    model.force(x, f);
    benchmark::DoNotOptimize(f.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size() / 3));
}
BENCHMARK(BM_Force)->Arg(4)->Arg(7)->Arg(10);

void BM_NeighborRebuild(benchmark::State& state) {
  const auto x = spheroid(static_cast<int>(state.range(0)));
  CellForceModel model(ForceLaw{}, 3);
  std::vector<double> f(x.size());
  for (auto _ : state) {
    model.invalidate();
    model.force(x, f);
    benchmark::DoNotOptimize(f.data());
  }
}
BENCHMARK(BM_NeighborRebuild)->Arg(4)->Arg(7)->Arg(10);

void BM_JacobianAssemble(benchmark::State& state) {
  const auto x = spheroid(static_cast<int>(state.range(0)));
  CellForceModel model(ForceLaw{}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(model.jacobian(x));
}
BENCHMARK(BM_JacobianAssemble)->Arg(4)->Arg(7)->Arg(10);

void BM_Gershgorin(benchmark::State& state) {
  const auto x = spheroid(static_cast<int>(state.range(0)));
  CellForceModel model(ForceLaw{}, 3);
  const BlockJacobian a = model.jacobian(x);
  for (auto _ : state) benchmark::DoNotOptimize(a.gershgorin());
}
BENCHMARK(BM_Gershgorin)->Arg(4)->Arg(7)->Arg(10);

void BM_JacobianProduct(benchmark::State& state) {
  const auto x = spheroid(static_cast<int>(state.range(0)));
  CellForceModel model(ForceLaw{}, 3);
  const BlockJacobian a = model.jacobian(x);
  std::vector<double> v(x.size(), 1.0), out(x.size());
  for (auto _ : state) {
    a.apply(v, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_JacobianProduct)->Arg(4)->Arg(7)->Arg(10);

void BM_Step(benchmark::State& state) {
  const auto method = static_cast<Method>(state.range(0));
  const auto x0 = spheroid(6);
  for (auto _ : state) {
    state.PauseTiming();
    auto x = x0;
    CellForceModel model(ForceLaw{}, 3);
    state.ResumeTiming();
    benchmark::DoNotOptimize(take_step(method, model, x, SolverConfig{}, kInf));
  }
  state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_Step)->DenseRange(0, 5);

}  // namespace
BENCHMARK_MAIN();
