#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "whsim/layout.hpp"
#include "whsim/nav_graph.hpp"

namespace whsim {

struct VehicleProfile {
  double travel_speed_mps = 2.0;
  double lift_speed_mps = 0.5;
  double turn_penalty_s = 3.0;  // per heading change of 45 degrees or more
  std::int32_t min_aisle_width_mm = 2800;
  int capacity_collar_units = 9;
  double handling_s = 20.0;        // pick or place at a rack position
  double floor_handling_s = 20.0;  // pick or place at an open-floor P position
  double deep_reach_s = 0.0;       // extra for the rear of a double-deep pair

  // Throws ConfigError unless every time and speed is strictly positive.
  void validate() const;
  // Turn penalty expressed as an equivalent travel length, rounded to mm.
  std::int64_t turn_penalty_mm() const;
  bool operator==(const VehicleProfile&) const = default;
};

struct Route {
  std::vector<NodeId> nodes;
  std::int64_t length_mm = 0;
  int turns = 0;
  double seconds = 0.0;  // length / speed + turns * penalty

  double length_m() const { return static_cast<double>(length_mm) / 1000.0; }
};

// True when consecutive directed edges change heading by 45 degrees or more.
bool is_turn(const NavGraph& g, std::uint32_t in_directed, std::uint32_t out_directed);

// Minimum-time route over edges wide enough for the vehicle. Among equal-cost
// routes the lexicographically smallest node sequence wins. Throws
// Unreachable.
Route shortest_path(const NavGraph& g, NodeId from, NodeId to,
                    const VehicleProfile& vehicle);

// Route time plus lifting to and from `lift_levels` and fixed handling.
double travel_time(const Route& route, const VehicleProfile& vehicle,
                   int lift_levels, double level_height_m);
double travel_time(const Route& route, const VehicleProfile& vehicle,
                   int lift_levels, double level_height_m, double handling_s);

// All-pairs minimum route cost in equivalent mm (length + turn penalties).
// Built once per layout and vehicle, then read concurrently.
class CostTable {
 public:
  CostTable() = default;
  CostTable(const NavGraph& g, const VehicleProfile& vehicle);

  std::int64_t cost_mm(NodeId from, NodeId to) const {
    return cost_[static_cast<std::size_t>(from) * n_ + to];
  }
  double seconds(NodeId from, NodeId to) const {
    return static_cast<double>(cost_mm(from, to)) / speed_mm_s_;
  }
  bool reachable(NodeId from, NodeId to) const { return cost_mm(from, to) < kInf; }
  std::size_t size() const { return n_; }

  static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

 private:
  std::size_t n_ = 0;
  double speed_mm_s_ = 1.0;
  std::vector<std::int64_t> cost_;
};

// Single-source costs over (node, arriving edge) states, reduced per node.
std::vector<std::int64_t> costs_from(const NavGraph& g, NodeId from,
                                     const VehicleProfile& vehicle);

struct InboundTask {
  PalletId pallet = 0;
  SlotId slot = 0;
  bool operator==(const InboundTask&) const = default;
};

// Left to right by destination x, then y, then slot id. Stable.
std::vector<InboundTask> sequence_inbound_tasks(std::vector<InboundTask> pending,
                                                const Layout& layout);

// Greedy nearest target from the truck's node; equal costs go to the lower
// slot id. Throws Unreachable when no target can be reached.
SlotId next_outbound_target(std::span<const SlotId> remaining, NodeId truck_node,
                            const Layout& layout, const CostTable& costs);
// Same rule without a prebuilt table: one single-source search from the truck.
SlotId next_outbound_target(std::span<const SlotId> remaining, NodeId truck_node,
                            const Layout& layout, const VehicleProfile& vehicle);

}  // namespace whsim
