#include "whsim/routing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <queue>

#include <fmt/format.h>

#include "whsim/errors.hpp"

namespace whsim {

void VehicleProfile::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) throw ConfigError(fmt::format("vehicle.{} must be positive", key));
  };
  positive(travel_speed_mps, "travel_speed_mps");
  positive(lift_speed_mps, "lift_speed_mps");
  positive(turn_penalty_s, "turn_penalty_s");
  positive(handling_s, "handling_s");
  positive(floor_handling_s, "floor_handling_s");
  positive(static_cast<double>(min_aisle_width_mm), "min_aisle_width_mm");
  positive(static_cast<double>(capacity_collar_units), "capacity_collar_units");
  if (deep_reach_s < 0.0) throw ConfigError("vehicle.deep_reach_s must be >= 0");
}

std::int64_t VehicleProfile::turn_penalty_mm() const {
  return std::llround(turn_penalty_s * travel_speed_mps * 1000.0);
}

bool is_turn(const NavGraph& g, std::uint32_t in_directed, std::uint32_t out_directed) {
  const Point& a0 = g.node(g.directed_from(in_directed));
  const Point& a1 = g.node(g.directed_to(in_directed));
  const Point& b0 = g.node(g.directed_from(out_directed));
  const Point& b1 = g.node(g.directed_to(out_directed));
  const double ux = static_cast<double>(a1.x - a0.x), uy = static_cast<double>(a1.y - a0.y);
  const double vx = static_cast<double>(b1.x - b0.x), vy = static_cast<double>(b1.y - b0.y);
  const double cosang = (ux * vx + uy * vy) / (std::hypot(ux, uy) * std::hypot(vx, vy));
  static const double kCos45 = std::cos(std::numbers::pi / 4.0);
  return cosang <= kCos45 + 1e-9;
}

namespace {

using Item = std::pair<std::int64_t, std::uint32_t>;
using MinHeap = std::priority_queue<Item, std::vector<Item>, std::greater<>>;

bool admissible(const NavGraph& g, std::uint32_t de, const VehicleProfile& v) {
  return g.edge(de / 2).width_mm >= v.min_aisle_width_mm;
}

// Cost to reach `to` from each arrival state (directed edge), stopping at the
// first arrival. kInf where unreachable.
std::vector<std::int64_t> cost_to_go(const NavGraph& g, NodeId to,
                                     const VehicleProfile& v) {
  const std::int64_t pen = v.turn_penalty_mm();
  std::vector<std::int64_t> h(2 * g.edge_count(), CostTable::kInf);
  MinHeap pq;
  for (const auto& arc : g.arcs(to)) {
    const std::uint32_t into = arc.directed_edge ^ 1U;
    if (!admissible(g, into, v)) continue;
    h[into] = 0;
    pq.emplace(0, into);
  }
  while (!pq.empty()) {
    auto [d, de] = pq.top();
    pq.pop();
    if (d != h[de]) continue;
    const NodeId u = g.directed_from(de);
    if (u == to) continue;
    const std::int64_t step = g.edge(de / 2).length_mm;
    for (const auto& arc : g.arcs(u)) {
      const std::uint32_t prev = arc.directed_edge ^ 1U;  // arrives at u
      if (!admissible(g, prev, v)) continue;
      const std::int64_t nd = d + step + (is_turn(g, prev, de) ? pen : 0);
      if (nd < h[prev]) {
        h[prev] = nd;
        pq.emplace(nd, prev);
      }
    }
  }
  return h;
}

}  // namespace

Route shortest_path(const NavGraph& g, NodeId from, NodeId to,
                    const VehicleProfile& vehicle) {
  if (from >= g.node_count() || to >= g.node_count()) {
    throw Unreachable(fmt::format("route {} -> {} references a missing node", from, to));
  }
  Route r;
  r.nodes.push_back(from);
  if (from == to) return r;

  const auto h = cost_to_go(g, to, vehicle);
  const std::int64_t pen = vehicle.turn_penalty_mm();
  std::int64_t h_cur = CostTable::kInf;
  for (const auto& arc : g.arcs(from)) {
    if (!admissible(g, arc.directed_edge, vehicle) || h[arc.directed_edge] >= CostTable::kInf) {
      continue;
    }
    h_cur = std::min(h_cur, g.edge(arc.directed_edge / 2).length_mm + h[arc.directed_edge]);
  }
  if (h_cur >= CostTable::kInf) {
    throw Unreachable(fmt::format("no admissible route from node {} to node {}", from, to));
  }

  NodeId node = from;
  bool has_prev = false;
  std::uint32_t prev = 0;
  while (node != to) {
    bool moved = false;
    for (const auto& arc : g.arcs(node)) {  // sorted by neighbour id
      const std::uint32_t de = arc.directed_edge;
      if (!admissible(g, de, vehicle) || h[de] >= CostTable::kInf) continue;
      const bool turn = has_prev && is_turn(g, prev, de);
      const std::int64_t step = g.edge(de / 2).length_mm + (turn ? pen : 0);
      if (step + h[de] != h_cur) continue;
      r.length_mm += g.edge(de / 2).length_mm;
      r.turns += turn ? 1 : 0;
      r.nodes.push_back(arc.to);
      h_cur = h[de];
      prev = de;
      has_prev = true;
      node = arc.to;
      moved = true;
      break;
    }
    if (!moved) throw LogicError("shortest_path: cost-to-go table is inconsistent");
  }
  r.seconds = static_cast<double>(r.length_mm) / 1000.0 / vehicle.travel_speed_mps +
              r.turns * vehicle.turn_penalty_s;
  return r;
}

double travel_time(const Route& route, const VehicleProfile& vehicle,
                   int lift_levels, double level_height_m, double handling_s) {
  if (lift_levels < 0) throw DomainError("lift_levels must be >= 0");
  return route.seconds +
         2.0 * (lift_levels * level_height_m / vehicle.lift_speed_mps) + handling_s;
}

double travel_time(const Route& route, const VehicleProfile& vehicle,
                   int lift_levels, double level_height_m) {
  return travel_time(route, vehicle, lift_levels, level_height_m, vehicle.handling_s);
}

std::vector<std::int64_t> costs_from(const NavGraph& g, NodeId from,
                                     const VehicleProfile& v) {
  const std::int64_t pen = v.turn_penalty_mm();
  std::vector<std::int64_t> state(2 * g.edge_count(), CostTable::kInf);
  std::vector<std::int64_t> node_cost(g.node_count(), CostTable::kInf);
  node_cost.at(from) = 0;
  MinHeap pq;
  for (const auto& arc : g.arcs(from)) {
    if (!admissible(g, arc.directed_edge, v)) continue;
    const std::int64_t d = g.edge(arc.directed_edge / 2).length_mm;
    if (d < state[arc.directed_edge]) {
      state[arc.directed_edge] = d;
      pq.emplace(d, arc.directed_edge);
    }
  }
  while (!pq.empty()) {
    auto [d, de] = pq.top();
    pq.pop();
    if (d != state[de]) continue;
    const NodeId u = g.directed_to(de);
    node_cost[u] = std::min(node_cost[u], d);
    for (const auto& arc : g.arcs(u)) {
      if (!admissible(g, arc.directed_edge, v)) continue;
      const std::int64_t nd = d + g.edge(arc.directed_edge / 2).length_mm +
                              (is_turn(g, de, arc.directed_edge) ? pen : 0);
      if (nd < state[arc.directed_edge]) {
        state[arc.directed_edge] = nd;
        pq.emplace(nd, arc.directed_edge);
      }
    }
  }
  return node_cost;
}

CostTable::CostTable(const NavGraph& g, const VehicleProfile& vehicle)
    : n_(g.node_count()), speed_mm_s_(vehicle.travel_speed_mps * 1000.0) {
  cost_.resize(n_ * n_);
  for (NodeId s = 0; s < n_; ++s) {
    const auto row = costs_from(g, s, vehicle);
    std::copy(row.begin(), row.end(), cost_.begin() + static_cast<std::ptrdiff_t>(s * n_));
  }
}

std::vector<InboundTask> sequence_inbound_tasks(std::vector<InboundTask> pending,
                                                const Layout& layout) {
  std::stable_sort(pending.begin(), pending.end(),
                   [&](const InboundTask& a, const InboundTask& b) {
                     const auto& sa = layout.slot(a.slot);
                     const auto& sb = layout.slot(b.slot);
                     if (sa.position.x != sb.position.x) return sa.position.x < sb.position.x;
                     if (sa.position.y != sb.position.y) return sa.position.y < sb.position.y;
                     return a.slot < b.slot;
                   });
  return pending;
}

namespace {

template <class CostFn>
SlotId nearest_target(std::span<const SlotId> remaining, const Layout& layout, CostFn cost) {
  if (remaining.empty()) throw DomainError("next_outbound_target: no targets");
  SlotId best = kNoSlot;
  std::int64_t best_cost = CostTable::kInf;
  for (SlotId s : remaining) {
    const std::int64_t c = cost(layout.slot(s).access_node);
    if (c < best_cost || (c == best_cost && c < CostTable::kInf && s < best)) {
      best = s;
      best_cost = c;
    }
  }
  if (best == kNoSlot) throw Unreachable("next_outbound_target: every target is unreachable");
  return best;
}

}  // namespace

SlotId next_outbound_target(std::span<const SlotId> remaining, NodeId truck_node,
                            const Layout& layout, const CostTable& costs) {
  return nearest_target(remaining, layout,
                        [&](NodeId n) { return costs.cost_mm(truck_node, n); });
}

SlotId next_outbound_target(std::span<const SlotId> remaining, NodeId truck_node,
                            const Layout& layout, const VehicleProfile& vehicle) {
  const auto row = costs_from(layout.nav, truck_node, vehicle);
  return nearest_target(remaining, layout, [&](NodeId n) { return row[n]; });
}

}  // namespace whsim
