#include <cmath>
#include <queue>
#include <vector>

#include "doctest.h"
#include "whsim/errors.hpp"
#include "whsim/slotting.hpp"

using namespace whsim;

namespace {

Pallet make_pallet(PalletId id, SkuId sku, SkuClass cls, int collars) {
  Pallet p;
  p.id = id;
  p.sku = sku;
  p.sku_class = cls;
  p.collars = collars;
  return p;
}

// Store a pallet where the policy says.
SlotId put(InventoryState& inv, const Pallet& p, Rng& rng) {
  const SlotId s = assign_slot(p, inv, rng);
  inv.reserve(s, p.id);
  inv.store(s, p.id, p.sku);
  return s;
}

// Corridor layout: outbound at node 0, nodes every metre, one single-deep
// slot per listed node.
Layout line_layout(const std::vector<int>& slot_nodes, int length_m = 50) {
  Layout L;
  for (int i = 0; i <= length_m; ++i) L.nav.add_node(Point{i * 1000, 0});
  for (int i = 1; i <= length_m; ++i) L.nav.add_edge(NodeId(i - 1), NodeId(i), 3000, EdgeKind::Aisle);
  L.outbound_staging = 0;
  L.inbound_staging = 0;
  for (int n : slot_nodes) {
    Slot s;
    s.id = SlotId(L.slots.size());
    s.access_node = NodeId(n);
    s.position = L.nav.node(NodeId(n));
    L.slots.push_back(s);
  }
  return L;
}

std::vector<double> dijkstra_m(const NavGraph& g, NodeId src) {
  std::vector<double> d(g.node_count(), 1e300);
  using It = std::pair<double, NodeId>;
  std::priority_queue<It, std::vector<It>, std::greater<>> pq;
  d[src] = 0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u]) continue;
    for (const auto& e : g.edges()) {
      if (e.a != u && e.b != u) continue;
      const NodeId v = e.a == u ? e.b : e.a;
      const double len = std::hypot(double(g.node(e.a).x - g.node(e.b).x),
                                    double(g.node(e.a).y - g.node(e.b).y)) / 1000.0;
      if (du + len < d[v]) {
        d[v] = du + len;
        pq.emplace(d[v], v);
      }
    }
  }
  return d;
}

}  // namespace

TEST_CASE("policy and layout compatibility") {
  CHECK_NOTHROW(check_compatible(PolicyKind::Random, LayoutVariant::Cpu));
  CHECK_NOTHROW(check_compatible(PolicyKind::ClassDistance, LayoutVariant::Conventional));
  CHECK_THROWS_AS(check_compatible(PolicyKind::FlyingVAbc, LayoutVariant::Conventional), ConfigError);
  CHECK_THROWS_AS(check_compatible(PolicyKind::FlyingVRandom, LayoutVariant::Cpu), ConfigError);
  CHECK_THROWS_AS(check_compatible(PolicyKind::CpuZone, LayoutVariant::FlyingV), ConfigError);
  for (auto p : {PolicyKind::Random, PolicyKind::ClassDistance, PolicyKind::FlyingVRandom,
                 PolicyKind::FlyingVAbc, PolicyKind::CpuZone}) {
    CHECK(parse_policy_kind(to_string(p)) == p);
  }
}

TEST_CASE("cpu zone places short A pallets on the P ground") {
  const auto L = build_cpu(LayoutSpec{});
  const Slotting sl(PolicyKind::CpuZone, {}, L);
  InventoryState inv(sl, 10);
  Rng rng(1);
  const SlotId s = assign_slot(make_pallet(1, 0, SkuClass::A, 2), inv, rng);
  CHECK(L.slots[s].zone == Zone::P);
  CHECK(L.slots[s].level == 0);
}

TEST_CASE("cpu zone keeps tall pallets out of P") {
  const auto L = build_cpu(LayoutSpec{});
  const Slotting sl(PolicyKind::CpuZone, {}, L);
  InventoryState inv(sl, 10);
  Rng rng(1);
  for (PalletId i = 0; i < 200; ++i) {
    const SlotId s = put(inv, make_pallet(i, 0, SkuClass::A, 6), rng);
    CHECK(L.slots[s].zone != Zone::P);
  }
}

TEST_CASE("cpu zone spills B past a full S zone") {
  const auto L = build_cpu(LayoutSpec{});
  const Slotting sl(PolicyKind::CpuZone, {}, L);
  InventoryState inv(sl, 10);
  Rng rng(1);
  PalletId id = 0;
  for (const auto& s : L.slots) {
    if (s.zone == Zone::S) inv.place(s.id, id++, 1);
  }
  const SlotId s = assign_slot(make_pallet(id, 1, SkuClass::B, 3), inv, rng);
  CHECK(L.slots[s].zone != Zone::S);
  const SlotId tall = assign_slot(make_pallet(id + 1, 1, SkuClass::B, 6), inv, rng);
  CHECK(L.slots[tall].zone == Zone::E);
}

TEST_CASE("full layout raises StorageFull with the class") {
  const auto L = line_layout({3, 4});
  const Slotting sl(PolicyKind::ClassDistance, {}, L);
  InventoryState inv(sl, 2);
  Rng rng(1);
  put(inv, make_pallet(0, 0, SkuClass::A, 1), rng);
  put(inv, make_pallet(1, 0, SkuClass::A, 1), rng);
  try {
    assign_slot(make_pallet(2, 1, SkuClass::C, 1), inv, rng);
    FAIL("expected StorageFull");
  } catch (const StorageFull& e) {
    CHECK(e.scope() == "class C");
  }
}

TEST_CASE("random policy is uniform over an empty layout") {
  const auto L = build_conventional(LayoutSpec{});
  const Slotting sl(PolicyKind::Random, {}, L);
  InventoryState inv(sl, 1);
  Rng rng(31337);
  std::vector<int> counts(L.slots.size(), 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[assign_slot(make_pallet(0, 0, SkuClass::A, 3), inv, rng)];
  const double expect = double(draws) / double(counts.size());
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expect) * (c - expect) / expect;
  // Wilson-Hilferty upper 1% point.
  const double df = double(counts.size() - 1);
  const double crit = df * std::pow(1.0 - 2.0 / (9.0 * df) + 2.3263 * std::sqrt(2.0 / (9.0 * df)), 3);
  CHECK(chi2 < crit);
}

TEST_CASE("policies are deterministic for a given rng state") {
  const auto L = build_conventional(LayoutSpec{});
  for (auto kind : {PolicyKind::Random, PolicyKind::ClassDistance}) {
    const Slotting sl(kind, {}, L);
    InventoryState a(sl, 3), b(sl, 3);
    Rng ra(4), rb(4);
    for (PalletId i = 0; i < 500; ++i) {
      const auto p = make_pallet(i, i % 3, kAllClasses[i % 3], 1 + int(i % 6));
      CHECK(put(a, p, ra) == put(b, p, rb));
    }
  }
}

TEST_CASE("cpu zone with headroom puts all short A in P and all C in E") {
  const auto L = build_cpu(LayoutSpec{});
  const Slotting sl(PolicyKind::CpuZone, {}, L);
  InventoryState inv(sl, 3);
  Rng rng(6), draw(7);
  for (PalletId i = 0; i < 1500; ++i) {
    const auto cls = draw_sku_class(draw.uniform(), {0.5, 0.25, 0.25});
    const int collars = 1 + static_cast<int>(draw.below(6));
    const auto p = make_pallet(i, SkuId(index_of(cls)), cls, collars);
    const SlotId s = put(inv, p, rng);
    if (cls == SkuClass::A && collars <= 4) CHECK(L.slots[s].zone == Zone::P);
    if (cls == SkuClass::C) CHECK(L.slots[s].zone == Zone::E);
    if (L.slots[s].zone == Zone::P) CHECK(collars <= 4);
  }
  inv.check_invariants();
}

TEST_CASE("class distance orders mean distances A < B < C") {
  for (auto variant : {LayoutVariant::Conventional, LayoutVariant::FlyingV}) {
    const auto L = build_layout(variant, LayoutSpec{});
    const auto kind = variant == LayoutVariant::FlyingV ? PolicyKind::FlyingVAbc
                                                        : PolicyKind::ClassDistance;
    const Slotting sl(kind, {}, L);
    InventoryState inv(sl, 3);
    Rng rng(2), draw(3);
    const auto d = dijkstra_m(L.nav, L.outbound_staging);
    double sum[3] = {0, 0, 0};
    int n[3] = {0, 0, 0};
    for (PalletId i = 0; i < 2000; ++i) {
      const auto cls = draw_sku_class(draw.uniform(), {0.2, 0.3, 0.5});
      const SlotId s = put(inv, make_pallet(i, SkuId(index_of(cls)), cls, 3), rng);
      sum[index_of(cls)] += d[L.slots[s].access_node];
      ++n[index_of(cls)];
      CHECK(sl.band_of(s) == int(index_of(cls)));
    }
    CHECK(sum[0] / n[0] < sum[1] / n[1]);
    CHECK(sum[1] / n[1] < sum[2] / n[2]);
  }
}

TEST_CASE("assignment then retrieval restores occupancy") {
  const auto L = build_cpu(LayoutSpec{});
  const Slotting sl(PolicyKind::CpuZone, {}, L);
  InventoryState inv(sl, 4);
  Rng rng(9);
  for (PalletId i = 0; i < 100; ++i) put(inv, make_pallet(i, i % 4, kAllClasses[i % 3], 2), rng);
  const auto before = inv.occupied_count();
  const SlotId s = put(inv, make_pallet(500, 2, SkuClass::B, 3), rng);
  CHECK(inv.occupied_count() == before + 1);
  CHECK(inv.remove(s) == 500);
  CHECK(inv.occupied_count() == before);
  inv.check_invariants();
}

TEST_CASE("double-deep admissibility and blocking") {
  LayoutSpec spec;
  spec.rows = 2;
  spec.bays = 1;
  spec.levels = 1;
  spec.positions_per_bay = 1;
  spec.target_slot_count = 0;
  const auto L = build_conventional(spec);
  REQUIRE(L.slots.size() == 4);
  const SlotId rear = 0, front = 1;
  REQUIRE(L.slots[rear].depth_index == 1);
  REQUIRE(L.slots[rear].partner == front);
  const Slotting sl(PolicyKind::Random, {}, L);
  const VehicleProfile v;
  const CostTable costs(L.nav, v);
  InventoryState inv(sl, 2);

  inv.reserve(rear, 10);
  CHECK_FALSE(inv.admissible(front));  // would bury a pending delivery
  inv.store(rear, 10, 0);
  CHECK(inv.admissible(front));
  CHECK(inv.retrievable(rear));
  inv.place(front, 11, 1);
  CHECK_FALSE(inv.retrievable(rear));
  CHECK(inv.retrievable(front));

  try {
    select_pallet_for_line(0, inv, L.outbound_staging, costs);
    FAIL("expected StockOut");
  } catch (const StockOut& e) {
    CHECK(e.blocked());
  }
  try {
    select_pallet_for_line(1, inv, L.outbound_staging, costs);
  } catch (...) {
    FAIL("front pallet should be selectable");
  }
  CHECK(blocked_candidate(0, inv, L.outbound_staging, costs) == rear);

  // Relocate the front pallet; the rear clears.
  inv.lock(front);
  CHECK(blocked_candidate(0, inv, L.outbound_staging, costs) == kNoSlot);
  Pallet moved;
  moved.id = 11;
  moved.collars = 2;
  const SlotId to = relocation_target(front, moved, inv, costs);
  CHECK(to != rear);
  CHECK(to != front);
  inv.reserve(to, 11);
  CHECK(inv.remove(front) == 11);
  inv.store(to, 11, 1);
  CHECK(select_pallet_for_line(0, inv, L.outbound_staging, costs) == rear);
  inv.check_invariants();

  // Empty SKU: not blocked.
  inv.remove(rear);
  try {
    select_pallet_for_line(0, inv, L.outbound_staging, costs);
    FAIL("expected StockOut");
  } catch (const StockOut& e) {
    CHECK_FALSE(e.blocked());
  }
}

TEST_CASE("select picks the nearest retrievable pallet") {
  const auto L = line_layout({12, 40});
  const Slotting sl(PolicyKind::Random, {}, L);
  const VehicleProfile v;
  const CostTable costs(L.nav, v);
  InventoryState inv(sl, 1);
  inv.place(1, 1, 0);
  CHECK(select_pallet_for_line(0, inv, 0, costs) == 1);  // only option
  inv.place(0, 0, 0);
  CHECK(select_pallet_for_line(0, inv, 0, costs) == 0);
  CHECK(select_pallet_for_line(0, inv, 45, costs) == 1);
  inv.lock(0);
  CHECK(select_pallet_for_line(0, inv, 0, costs) == 1);
}

TEST_CASE("distance rank") {
  const auto line = line_layout({2});
  const DistanceRank dr(line);
  CHECK(dr.meters(0) == doctest::Approx(2.0));
  CHECK(dr.meters(0) == dr.meters(0));

  const auto L = build_flying_v(LayoutSpec{});
  const DistanceRank rank(L);
  const auto d = dijkstra_m(L.nav, L.outbound_staging);
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const auto s = SlotId(rng.below(L.slots.size()));
    CHECK(std::abs(rank.meters(s) - d[L.slots[s].access_node]) < 0.01);
  }
}

TEST_CASE("invalid policy parameters") {
  const auto L = build_conventional(LayoutSpec{});
  PolicyParams p;
  p.p_zone_max_collars = 7;
  CHECK_THROWS_AS(Slotting(PolicyKind::Random, p, L), ConfigError);
  p = {};
  p.band_shares = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(Slotting(PolicyKind::ClassDistance, p, L), ConfigError);
}

TEST_CASE("relocation keeps a C pallet out of P when E is full") {
  const auto L = build_cpu(LayoutSpec{});
  const Slotting sl(PolicyKind::CpuZone, {}, L);
  const VehicleProfile v;
  const CostTable costs(L.nav, v);
  InventoryState inv(sl, 1);
  PalletId next = 0;
  SlotId from = kNoSlot;
  for (const auto& s : L.slots) {
    if (s.zone != Zone::E) continue;
    inv.place(s.id, next++, 0);
    if (from == kNoSlot && s.partner == kNoSlot) from = s.id;
  }
  if (from == kNoSlot) {
    for (const auto& s : L.slots) {
      if (s.zone == Zone::E && s.depth_index == 0) {
        from = s.id;
        break;
      }
    }
  }
  REQUIRE(from != kNoSlot);
  Pallet c;
  c.id = inv.occupant(from);
  c.sku_class = SkuClass::C;
  c.collars = 4;
  inv.lock(from);
  const SlotId to = relocation_target(from, c, inv, costs);
  CHECK(L.slots[to].zone == Zone::S);

  // Short A may use P; tall A never does.
  Pallet a = c;
  a.sku_class = SkuClass::A;
  a.collars = 2;
  CHECK(L.slots[relocation_target(from, a, inv, costs)].zone == Zone::P);
  a.collars = sl.params().p_zone_max_collars + 1;
  CHECK(L.slots[relocation_target(from, a, inv, costs)].zone != Zone::P);
}
