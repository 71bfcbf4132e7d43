// Serial reference vs OpenMP kernels on operator-sized inputs.

#include <benchmark/benchmark.h>

#include <cmath>

#include "pdem/kernels.hpp"
#include "pdem/models.hpp"
#include "pdem/operators.hpp"

namespace {

using namespace pdem;

DiscreteOperator hamiltonian(int n) {
  const Grid grid(-12.0, 12.0, n);
  return discretize_schrodinger_q(evaluate_model(PotentialModel::pseudo_pt(2.5), grid));
}

DiscreteOperator eta(int n) {
  const Grid grid(-12.0, 12.0, n);
  const Generator gen = Generator::cosech(2.5);
  const PotentialModel model = PotentialModel::pseudo_pt(2.5);
  const ComplexField f = kernels::serial::sample(grid, [&](double s) { return gen.value(model.shifted(s)); });
  return discretize_eta(f, MassProfile::constant(1.0), EtaKind::second);
}

template <bool Parallel>
void BM_Sample(benchmark::State& state) {
  const Grid grid(-12.0, 12.0, static_cast<int>(state.range(0)));
  const PotentialModel model = PotentialModel::pseudo_pt(2.5);
  for (auto _ : state) {
    auto f = Parallel ? kernels::parallel::sample(grid, model) : kernels::serial::sample(grid, model);
    benchmark::DoNotOptimize(f);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Multiply(benchmark::State& state) {
  const auto h = hamiltonian(static_cast<int>(state.range(0)));
  const auto e = eta(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto p = Parallel ? kernels::parallel::multiply(e.matrix, h.matrix) : kernels::serial::multiply(e.matrix, h.matrix);
    benchmark::DoNotOptimize(p);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Apply(benchmark::State& state) {
  const auto h = hamiltonian(static_cast<int>(state.range(0)));
  std::vector<cplx> x(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = cplx(std::sin(0.1 * i), std::cos(0.3 * i));
  for (auto _ : state) {
    auto y = Parallel ? kernels::parallel::apply(h.matrix, x) : kernels::serial::apply(h.matrix, x);
    benchmark::DoNotOptimize(y);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_MaxAbsDiff(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto h = hamiltonian(n);
  const auto adj = weighted_adjoint(h);
  for (auto _ : state) {
    double d = Parallel ? kernels::parallel::max_abs_diff(h.matrix, adj.matrix, 2, n - 2)
                        : kernels::serial::max_abs_diff(h.matrix, adj.matrix, 2, n - 2);
    benchmark::DoNotOptimize(d);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Sample<false>)->Name("sample/serial")->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_Sample<true>)->Name("sample/parallel")->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_Multiply<false>)->Name("multiply/serial")->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_Multiply<true>)->Name("multiply/parallel")->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_Apply<false>)->Name("apply/serial")->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_Apply<true>)->Name("apply/parallel")->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_MaxAbsDiff<false>)->Name("max_abs_diff/serial")->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_MaxAbsDiff<true>)->Name("max_abs_diff/parallel")->RangeMultiplier(4)->Range(1 << 10, 1 << 18);

BENCHMARK_MAIN();
