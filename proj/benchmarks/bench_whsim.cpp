#include <vector>

#include <benchmark/benchmark.h>

#include "whsim/simulation.hpp"

using namespace whsim;

namespace {

LayoutVariant variant_of(std::int64_t i) { return static_cast<LayoutVariant>(i); }

void BM_BuildLayout(benchmark::State& state) {
  const auto v = variant_of(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_layout(v, LayoutSpec{}));
  state.SetLabel(to_string(v));
}
BENCHMARK(BM_BuildLayout)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_CostTable(benchmark::State& state) {
  const auto v = variant_of(state.range(0));
  const Layout L = build_layout(v, LayoutSpec{});
  const VehicleProfile vp;
  for (auto _ : state) benchmark::DoNotOptimize(CostTable(L.nav, vp));
  state.SetLabel(std::string(to_string(v)) + " nodes=" + std::to_string(L.nav.node_count()));
}
BENCHMARK(BM_CostTable)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_ShortestPath(benchmark::State& state) {
  const Layout L = build_layout(LayoutVariant::Cpu, LayoutSpec{});
  const VehicleProfile vp;
  Rng rng(1);
  std::vector<std::pair<NodeId, NodeId>> pairs(256);
  for (auto& p : pairs) {
    p = {NodeId(rng.below(L.nav.node_count())), NodeId(rng.below(L.nav.node_count()))};
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(shortest_path(L.nav, a, b, vp));
  }
}
BENCHMARK(BM_ShortestPath)->Unit(benchmark::kMicrosecond);

// Placement into a half-full CPU layout. assign_slot only chooses, so the
// fill level stays put.
void BM_AssignSlot(benchmark::State& state) {
  const Layout L = build_layout(LayoutVariant::Cpu, LayoutSpec{});
  const Slotting sl(PolicyKind::CpuZone, {}, L);
  InventoryState inv(sl, 1);
  Rng rng(2);
  for (SlotId s = 0; s < L.slots.size(); s += 2) inv.place(s, s, 0);
  Pallet p;
  p.id = 1'000'000;
  const SkuClass classes[] = {SkuClass::A, SkuClass::B, SkuClass::C};
  std::size_t i = 0;
  for (auto _ : state) {
    p.sku_class = classes[i % 3];
    p.collars = 1 + static_cast<int>(i % 4);
    ++i;
    benchmark::DoNotOptimize(assign_slot(p, inv, rng));
  }
}
BENCHMARK(BM_AssignSlot)->Unit(benchmark::kMicrosecond);

// One replication of two days after a one-day warm-up.
void BM_Replication(benchmark::State& state) {
  Scenario s;
  s.variant = variant_of(state.range(0));
  s.policy = s.variant == LayoutVariant::Cpu       ? PolicyKind::CpuZone
             : s.variant == LayoutVariant::FlyingV ? PolicyKind::FlyingVAbc
                                                   : PolicyKind::ClassDistance;
  s.name = to_string(s.variant);
  s.plan.n_days = 2;
  s.plan.warm_up_days = 1;
  const Model model(s);
  int rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_replication(model, rep++));
  state.SetLabel(s.name);
}
BENCHMARK(BM_Replication)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
