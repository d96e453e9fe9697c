#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "whsim/errors.hpp"
#include "whsim/layout.hpp"
#include "whsim/routing.hpp"

using namespace whsim;

namespace {

VehicleProfile flat_vehicle() {
  VehicleProfile v;
  v.turn_penalty_s = 1e-9;  // rounds to 0 mm
  return v;
}

NavGraph corridor(int n, std::int64_t step) {
  NavGraph g;
  for (int i = 0; i < n; ++i) g.add_node(Point{i * step, 0});
  for (int i = 1; i < n; ++i) g.add_edge(NodeId(i - 1), NodeId(i), 3000, EdgeKind::Aisle);
  return g;
}

// Floyd-Warshall over edge lengths.
std::vector<std::vector<std::int64_t>> all_pairs(const NavGraph& g, std::int32_t min_w) {
  const std::size_t n = g.node_count();
  const std::int64_t inf = CostTable::kInf;
  std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) {
    if (e.width_mm < min_w) continue;
    d[e.a][e.b] = std::min(d[e.a][e.b], e.length_mm);
    d[e.b][e.a] = std::min(d[e.b][e.a], e.length_mm);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] < inf && d[k][j] < inf) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

std::int64_t route_cost(const Route& r, const VehicleProfile& v) {
  return r.length_mm + r.turns * v.turn_penalty_mm();
}

}  // namespace

TEST_CASE("straight corridor has no turns") {
  const auto g = corridor(10, 1000);
  const auto r = shortest_path(g, 0, 9, VehicleProfile{});
  CHECK(r.length_mm == 9000);
  CHECK(r.turns == 0);
  CHECK(r.nodes.size() == 10);
  CHECK(r.seconds == doctest::Approx(4.5));
}

TEST_CASE("route to itself is empty") {
  const auto g = corridor(3, 1000);
  const auto r = shortest_path(g, 1, 1, VehicleProfile{});
  CHECK(r.length_mm == 0);
  CHECK(r.turns == 0);
  CHECK(r.seconds == 0.0);
  CHECK(r.nodes.size() == 1);
}

TEST_CASE("unreachable and too-narrow edges") {
  NavGraph g;
  g.add_node({0, 0});
  g.add_node({1000, 0});
  g.add_node({5000, 0});
  g.add_edge(0, 1, 2000, EdgeKind::Aisle);
  CHECK_THROWS_AS(shortest_path(g, 0, 2, VehicleProfile{}), Unreachable);
  CHECK_THROWS_AS(shortest_path(g, 0, 1, VehicleProfile{}), Unreachable);  // 2.0 m < 2.8 m
}

TEST_CASE("route cost matches Floyd-Warshall on random graphs") {
  Rng rng(2024);
  const auto v = flat_vehicle();
  for (int trial = 0; trial < 4; ++trial) {
    NavGraph g;
    const int n = 50;
    for (int i = 0; i < n; ++i) {
      g.add_node(Point{static_cast<std::int64_t>(rng.below(100000)),
                       static_cast<std::int64_t>(rng.below(100000))});
    }
    // Spanning chain plus random chords.
    for (int i = 1; i < n; ++i) {
      g.add_edge(NodeId(rng.below(static_cast<std::uint64_t>(i))), NodeId(i), 3000,
                 EdgeKind::Aisle);
    }
    for (int k = 0; k < 60; ++k) {
      const auto a = NodeId(rng.below(n)), b = NodeId(rng.below(n));
      if (a == b || g.node(a) == g.node(b)) continue;
      g.add_edge(a, b, rng.uniform() < 0.2 ? 2000 : 3000, EdgeKind::Aisle);
    }
    const auto d = all_pairs(g, v.min_aisle_width_mm);
    for (int q = 0; q < 50; ++q) {
      const auto a = NodeId(rng.below(n)), b = NodeId(rng.below(n));
      const auto r = shortest_path(g, a, b, v);
      CHECK(r.length_mm == d[a][b]);
      // Route length equals the sum of its edges.
      std::int64_t sum = 0;
      for (std::size_t i = 1; i < r.nodes.size(); ++i) {
        const auto& p = g.node(r.nodes[i - 1]);
        const auto& c = g.node(r.nodes[i]);
        sum += std::llround(std::hypot(double(p.x - c.x), double(p.y - c.y)));
      }
      CHECK(std::abs(sum - r.length_mm) <= static_cast<std::int64_t>(r.nodes.size()));
    }
  }
}

TEST_CASE("turn penalties match exhaustive walk enumeration") {
  Rng rng(77);
  const VehicleProfile v;
  for (int trial = 0; trial < 25; ++trial) {
    // Subgraph of a 3x3 lattice with diagonals, 10 m spacing.
    NavGraph g;
    for (int y = 0; y < 3; ++y)
      for (int x = 0; x < 3; ++x) g.add_node(Point{x * 10000, y * 10000});
    auto id = [](int x, int y) { return NodeId(y * 3 + x); };
    for (int y = 0; y < 3; ++y) {
      for (int x = 0; x < 3; ++x) {
        if (x + 1 < 3 && rng.uniform() < 0.8) g.add_edge(id(x, y), id(x + 1, y), 3000, EdgeKind::Aisle);
        if (y + 1 < 3 && rng.uniform() < 0.8) g.add_edge(id(x, y), id(x, y + 1), 3000, EdgeKind::Aisle);
        if (x + 1 < 3 && y + 1 < 3 && rng.uniform() < 0.3)
          g.add_edge(id(x, y), id(x + 1, y + 1), 3000, EdgeKind::Diagonal);
      }
    }
    for (NodeId a = 0; a < 9; ++a) {
      for (NodeId b = 0; b < 9; ++b) {
        if (a == b) continue;
        const auto want = oracle::enumerate(g, a, b, v);
        CHECK(oracle::dijkstra(g, a, b, v) == want);
        if (want >= CostTable::kInf) {
          CHECK_THROWS_AS(shortest_path(g, a, b, v), Unreachable);
          continue;
        }
        const auto r = shortest_path(g, a, b, v);
        CHECK(route_cost(r, v) == want);
        CHECK(CostTable(g, v).cost_mm(a, b) == want);
      }
    }
  }
}

TEST_CASE("equal-cost routes resolve to the lexicographically smallest") {
  // Square 0-1-3 and 0-2-3, both one turn.
  NavGraph g;
  g.add_node({0, 0});
  g.add_node({10000, 0});
  g.add_node({0, 10000});
  g.add_node({10000, 10000});
  g.add_edge(0, 2, 3000, EdgeKind::Aisle);
  g.add_edge(2, 3, 3000, EdgeKind::Aisle);
  g.add_edge(0, 1, 3000, EdgeKind::Aisle);
  g.add_edge(1, 3, 3000, EdgeKind::Aisle);
  const auto r = shortest_path(g, 0, 3, VehicleProfile{});
  CHECK(r.nodes == std::vector<NodeId>{0, 1, 3});
  CHECK(r.turns == 1);
  const auto again = shortest_path(g, 0, 3, VehicleProfile{});
  CHECK(again.nodes == r.nodes);
}

TEST_CASE("travel time arithmetic") {
  VehicleProfile v;
  Route r;
  r.length_mm = 30000;
  r.seconds = 15.0;
  CHECK(travel_time(r, v, 0, 1.5, 0.0) == doctest::Approx(15.0));
  r.turns = 2;
  r.seconds = 15.0 + 2 * v.turn_penalty_s;
  CHECK(travel_time(r, v, 0, 1.5, 0.0) == doctest::Approx(21.0));
  CHECK(travel_time(r, v, 2, 1.5, 0.0) - travel_time(r, v, 0, 1.5, 0.0) ==
        doctest::Approx(12.0));
  CHECK(travel_time(r, v, 0, 1.5) == doctest::Approx(21.0 + v.handling_s));
  CHECK_THROWS_AS(travel_time(r, v, -1, 1.5), DomainError);
}

TEST_CASE("travel time adds up over concatenated routes") {
  // L-shaped corridor: 0..4 along x, then 4..8 along y.
  NavGraph g;
  for (int i = 0; i < 5; ++i) g.add_node({i * 2000, 0});
  for (int i = 1; i < 5; ++i) g.add_node({8000, i * 2000});
  for (NodeId i = 1; i < 9; ++i) g.add_edge(i - 1, i, 3000, EdgeKind::Aisle);
  const VehicleProfile v;
  const auto whole = shortest_path(g, 1, 7, v);
  const auto first = shortest_path(g, 1, 4, v);
  const auto second = shortest_path(g, 4, 7, v);
  CHECK(whole.turns == 1);
  CHECK(whole.seconds == doctest::Approx(first.seconds + second.seconds + v.turn_penalty_s));
}

TEST_CASE("vehicle profile validation") {
  VehicleProfile v;
  CHECK_NOTHROW(v.validate());
  CHECK(v.capacity_collar_units == 9);
  v.lift_speed_mps = 0.0;
  CHECK_THROWS_AS(v.validate(), ConfigError);
}

TEST_CASE("inbound tasks run left to right") {
  Layout L;
  for (int i = 0; i < 4; ++i) {
    Slot s;
    s.id = SlotId(i);
    L.slots.push_back(s);
  }
  L.slots[0].position = {30000, 0};
  L.slots[1].position = {10000, 0};
  L.slots[2].position = {20000, 0};
  L.slots[3].position = {20000, 0};
  const auto out = sequence_inbound_tasks({{7, 0}, {8, 1}, {9, 2}}, L);
  CHECK(out == std::vector<InboundTask>{{8, 1}, {9, 2}, {7, 0}});
  CHECK(sequence_inbound_tasks({{5, 2}}, L) == std::vector<InboundTask>{{5, 2}});
  const std::vector<InboundTask> sorted{{1, 1}, {2, 2}, {3, 3}, {4, 0}};
  CHECK(sequence_inbound_tasks(sorted, L) == sorted);
}

TEST_CASE("next outbound target is the nearest, ties to the lower id") {
  Layout L;
  L.nav = corridor(5, 4000);  // nodes at 0, 4, 8, 12, 16 m
  auto add = [&](NodeId node) {
    Slot s;
    s.id = SlotId(L.slots.size());
    s.access_node = node;
    L.slots.push_back(s);
  };
  add(1);  // slot 0, 4 m
  add(4);  // slot 1, 16 m
  add(3);  // slot 2, 4 m from node 2
  add(1);  // slot 3, also 4 m from node 2
  const VehicleProfile v;
  const CostTable costs(L.nav, v);
  const std::vector<SlotId> two{1, 0};
  CHECK(next_outbound_target(two, 0, L, costs) == 0);
  const std::vector<SlotId> tie{3, 2};
  CHECK(next_outbound_target(tie, 2, L, costs) == 2);
  CHECK(next_outbound_target(tie, 2, L, v) == 2);
  CHECK_THROWS_AS(next_outbound_target(std::span<const SlotId>{}, 0, L, costs), DomainError);
}

TEST_CASE("greedy sequence on a line never loses to reverse order") {
  Rng rng(5);
  const VehicleProfile v;
  for (int trial = 0; trial < 30; ++trial) {
    Layout L;
    L.nav = corridor(20, 1500);
    const int k = 2 + static_cast<int>(rng.below(5));
    std::vector<SlotId> ids;
    for (int i = 0; i < k; ++i) {
      Slot s;
      s.id = SlotId(i);
      s.access_node = NodeId(1 + rng.below(19));
      L.slots.push_back(s);
      ids.push_back(s.id);
    }
    const CostTable costs(L.nav, v);
    NodeId at = 0;
    std::int64_t greedy = 0;
    auto left = ids;
    while (!left.empty()) {
      const SlotId s = next_outbound_target(left, at, L, costs);
      greedy += costs.cost_mm(at, L.slots[s].access_node);
      at = L.slots[s].access_node;
      left.erase(std::find(left.begin(), left.end(), s));
    }
    std::sort(ids.begin(), ids.end(), [&](SlotId a, SlotId b) {
      return L.slots[a].access_node > L.slots[b].access_node;
    });
    std::int64_t reverse = 0;
    at = 0;
    for (SlotId s : ids) {
      reverse += costs.cost_mm(at, L.slots[s].access_node);
      at = L.slots[s].access_node;
    }
    CHECK(greedy <= reverse);
  }
}

TEST_CASE("layout costs satisfy the triangle property and agree with routes") {
  const LayoutSpec spec;
  const auto L = build_cpu(spec);
  const VehicleProfile v;
  const CostTable costs(L.nav, v);
  Rng rng(8);
  const auto n = L.nav.node_count();
  for (int i = 0; i < 2000; ++i) {
    const auto a = NodeId(rng.below(n)), b = NodeId(rng.below(n)), c = NodeId(rng.below(n));
    CHECK(costs.cost_mm(a, c) <= costs.cost_mm(a, b) + costs.cost_mm(b, c) + v.turn_penalty_mm());
  }
  for (int i = 0; i < 100; ++i) {
    const auto a = NodeId(rng.below(n)), b = NodeId(rng.below(n));
    CHECK(route_cost(shortest_path(L.nav, a, b, v), v) == costs.cost_mm(a, b));
  }
}

TEST_CASE("removing the V never shortens a slot's way out") {
  const LayoutSpec spec;
  const auto L = build_flying_v(spec);
  const VehicleProfile v;
  const auto with = costs_from(L.nav, L.outbound_staging, v);
  const auto without = costs_from(L.nav.without(EdgeKind::Diagonal), L.outbound_staging, v);
  int shorter = 0;
  for (const auto& s : L.slots) {
    CHECK(without[s.access_node] >= with[s.access_node]);
    if (without[s.access_node] > with[s.access_node]) ++shorter;
  }
  CHECK(shorter > 0);
}

TEST_CASE("layout routes match the reference Dijkstra") {
  const VehicleProfile v;
  Rng rng(31);
  for (const auto& L : {build_conventional(LayoutSpec{}), build_flying_v(LayoutSpec{})}) {
    const auto n = L.nav.node_count();
    for (int i = 0; i < 20; ++i) {
      const auto a = NodeId(rng.below(n)), b = NodeId(rng.below(n));
      CHECK(route_cost(shortest_path(L.nav, a, b, v), v) == oracle::dijkstra(L.nav, a, b, v));
    }
  }
}
