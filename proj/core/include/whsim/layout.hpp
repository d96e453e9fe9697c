#pragma once

#include <limits>
#include <string>
#include <vector>

#include "whsim/model.hpp"
#include "whsim/nav_graph.hpp"

namespace whsim {

enum class Zone : std::uint8_t { P, E, S, Unzoned };
const char* to_string(Zone z);

enum class LayoutVariant : std::uint8_t { Conventional, FlyingV, Cpu, Current };
const char* to_string(LayoutVariant v);
LayoutVariant parse_layout_variant(const std::string& s);

inline constexpr SlotId kNoSlot = std::numeric_limits<SlotId>::max();

struct ZoneFractions {
  double p = 0.20;
  double e = 0.50;
  double s = 0.30;
  void validate() const;  // nonnegative, summing to 1
  bool operator==(const ZoneFractions&) const = default;
};

// One pallet position. `position` is the pick face on the aisle edge; `cell`
// is the ground footprint of the position (shared by every level above it).
struct Slot {
  SlotId id = 0;
  Point position;
  Rect cell;
  int level = 0;
  int depth_index = 0;  // 1 = rear of a double-deep pair
  Zone zone = Zone::Unzoned;
  int max_collars = kMaxCollars;
  NodeId access_node = 0;
  SlotId partner = kNoSlot;  // front for a rear slot, rear for a front slot
  int aisle = 0;
};

struct LayoutSpec {
  int rows = 24;  // rack rows; two rows face each aisle
  int bays = 0;   // bays per row, 0 derives the count from target_slot_count
  int positions_per_bay = 2;
  int deep_positions = 2;
  int levels = 3;
  std::int32_t aisle_width_mm = 3200;
  std::int32_t cross_aisle_width_mm = 3200;
  std::int32_t wide_aisle_width_mm = 4000;
  std::int32_t rack_depth_mm = 1200;  // one deep position
  std::int32_t bay_width_mm = 2800;
  std::int32_t level_height_mm = 1500;
  std::int32_t top_clearance_mm = 2000;
  ZoneFractions zone_fractions;
  int p_levels = 2;     // CPU: rack levels in the P section (ground = P)
  int e_levels = 4;     // CPU: rack levels outside the P section
  int wide_aisles = 0;  // CPU: aisles in the P section, 0 = auto
  double diagonal_angle_deg = 45.0;
  int target_slot_count = 3744;
  double inbound_x_fraction = 0.25;

  bool operator==(const LayoutSpec&) const = default;
};

struct Layout {
  std::string name;
  LayoutVariant variant = LayoutVariant::Conventional;
  std::vector<Slot> slots;
  NavGraph nav;
  NodeId inbound_staging = 0;
  NodeId outbound_staging = 0;
  std::vector<Rect> footprint;  // disjoint rectangles: racks and interior aisles
  ZoneFractions zone_fractions;
  std::int32_t level_height_mm = 1500;
  int aisle_count = 0;

  const Slot& slot(SlotId id) const { return slots.at(id); }
  std::size_t zone_count(Zone z) const;
  Rect bounds() const;
};

Layout build_conventional(const LayoutSpec& spec);
Layout build_flying_v(const LayoutSpec& spec);
Layout build_cpu(const LayoutSpec& spec);
// Conventional geometry with the legacy spec of the existing building.
Layout build_current(const LayoutSpec& spec);
Layout build_layout(LayoutVariant variant, const LayoutSpec& spec);

// Floor area of racks and interior aisles in m^2; staging is not included.
double compute_area(const Layout& layout);

void translate(Layout& layout, std::int64_t dx, std::int64_t dy);

// Length-only (no turn penalty) shortest distance in mm from every node to
// the outbound staging node, over all edges.
std::vector<std::int64_t> outbound_distances(const Layout& layout);

}  // namespace whsim
