// Parallel kernels against their serial references.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "../tests/support.hpp"
#include "vhetcs/network.hpp"
#include "vhetcs/optimize.hpp"
#include "vhetcs/rng.hpp"

namespace {

using namespace vhetcs;

template <EsDecision (*Select)(const LoadsView&, const CostModel&, const EsOptions&)>
void bm_es(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(42);
  const LoadsView view = testing::random_view(rng, n, 0.6);
  const CostModel model = testing::default_costs(n);
  EsOptions options;
  options.max_sbs = n;
  for (auto _ : state) benchmark::DoNotOptimize(Select(view, model, options));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}

struct LinkFixture {
  std::vector<BaseStationSpec> stations;
  std::vector<UserEquipment> ues;
  std::vector<std::uint8_t> active;
  std::vector<double> shadow;
  RadioParams radio;

  LinkFixture(int n, int e) : stations(place_network(n, 1025.0, 20000.0)), active(stations.size(), 1) {
    Rng rng(7);
    for (int i = 0; i < e; ++i) {
      UserEquipment ue;
      ue.id = i + 1;
      ue.position = {rng.uniform(0.0, 1025.0), rng.uniform(0.0, 1025.0)};
      ues.push_back(ue);
    }
    for (std::size_t k = 0; k < stations.size() * ues.size(); ++k) shadow.push_back(rng.standard_normal());
  }
};

template <bool Parallel>
void bm_links(benchmark::State& state) {
  const LinkFixture f(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(compute_link_matrix(f.stations, f.ues, f.active, f.radio, f.shadow));
    else
      benchmark::DoNotOptimize(compute_link_matrix_serial(f.stations, f.ues, f.active, f.radio, f.shadow));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

BENCHMARK(bm_es<es_select>)->Name("es_select/parallel")->DenseRange(4, 16, 4);
BENCHMARK(bm_es<es_select_serial>)->Name("es_select/serial")->DenseRange(4, 16, 4);
BENCHMARK(bm_links<true>)->Name("link_matrix/parallel")->Args({8, 600})->Args({8, 5000});
BENCHMARK(bm_links<false>)->Name("link_matrix/serial")->Args({8, 600})->Args({8, 5000});

}  // namespace

BENCHMARK_MAIN();
