#include "whsim/layout.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <queue>

#include <fmt/format.h>

#include "whsim/errors.hpp"

namespace whsim {

const char* to_string(Zone z) {
  switch (z) {
    case Zone::P: return "P";
    case Zone::E: return "E";
    case Zone::S: return "S";
    case Zone::Unzoned: return "Unzoned";
  }
  return "?";
}

const char* to_string(LayoutVariant v) {
  switch (v) {
    case LayoutVariant::Conventional: return "conventional";
    case LayoutVariant::FlyingV: return "flying_v";
    case LayoutVariant::Cpu: return "cpu";
    case LayoutVariant::Current: return "current";
  }
  return "?";
}

LayoutVariant parse_layout_variant(const std::string& s) {
  if (s == "conventional") return LayoutVariant::Conventional;
  if (s == "flying_v") return LayoutVariant::FlyingV;
  if (s == "cpu") return LayoutVariant::Cpu;
  if (s == "current") return LayoutVariant::Current;
  throw ConfigError(fmt::format(
      "unknown layout '{}' (expected conventional, flying_v, cpu or current)", s));
}

std::size_t Layout::zone_count(Zone z) const {
  return static_cast<std::size_t>(std::count_if(
      slots.begin(), slots.end(), [z](const Slot& s) { return s.zone == z; }));
}

Rect Layout::bounds() const {
  if (footprint.empty()) return {};
  Rect r = footprint.front();
  for (const auto& f : footprint) {
    r.x0 = std::min(r.x0, f.x0);
    r.y0 = std::min(r.y0, f.y0);
    r.x1 = std::max(r.x1, f.x1);
    r.y1 = std::max(r.y1, f.y1);
  }
  return r;
}

double compute_area(const Layout& layout) {
  double a = 0.0;
  for (const auto& r : layout.footprint) a += r.area_m2();
  return a;
}

void translate(Layout& layout, std::int64_t dx, std::int64_t dy) {
  layout.nav.translate(dx, dy);
  for (auto& s : layout.slots) {
    s.position.x += dx;
    s.position.y += dy;
    s.cell = Rect{s.cell.x0 + dx, s.cell.y0 + dy, s.cell.x1 + dx, s.cell.y1 + dy};
  }
  for (auto& r : layout.footprint) r = Rect{r.x0 + dx, r.y0 + dy, r.x1 + dx, r.y1 + dy};
}

std::vector<std::int64_t> outbound_distances(const Layout& layout) {
  const auto& g = layout.nav;
  constexpr auto kInf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> dist(g.node_count(), kInf);
  using Item = std::pair<std::int64_t, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[layout.outbound_staging] = 0;
  pq.emplace(0, layout.outbound_staging);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d != dist[u]) continue;
    for (const auto& arc : g.arcs(u)) {
      const auto nd = d + g.edge(arc.directed_edge / 2).length_mm;
      if (nd < dist[arc.to]) {
        dist[arc.to] = nd;
        pq.emplace(nd, arc.to);
      }
    }
  }
  return dist;
}

namespace {

struct Section {
  int bay_begin = 0;
  int bay_end = 0;
  int levels = 1;
  bool p_section = false;
};

struct AislePlan {
  std::int32_t width = 0;
  bool left_row = true;
  bool right_row = true;
  std::vector<Section> sections;
};

struct Diagonal {
  double angle_deg = 45.0;
};

void validate_common(const LayoutSpec& spec) {
  auto positive = [](long v, const char* key) {
    if (v <= 0) throw ConfigError(fmt::format("layout.{} must be positive", key));
  };
  positive(spec.rows, "rows");
  positive(spec.positions_per_bay, "positions_per_bay");
  positive(spec.levels, "levels");
  positive(spec.aisle_width_mm, "aisle_width_mm");
  positive(spec.cross_aisle_width_mm, "cross_aisle_width_mm");
  positive(spec.rack_depth_mm, "rack_depth_mm");
  positive(spec.bay_width_mm, "bay_width_mm");
  positive(spec.level_height_mm, "level_height_mm");
  if (spec.deep_positions != 1 && spec.deep_positions != 2) {
    throw ConfigError("layout.deep_positions must be 1 or 2");
  }
  if (spec.bays < 0) throw ConfigError("layout.bays must be >= 0");
  if (spec.top_clearance_mm < 0) throw ConfigError("layout.top_clearance_mm must be >= 0");
  if (spec.target_slot_count < 0) throw ConfigError("layout.target_slot_count must be >= 0");
  if (spec.bays == 0 && spec.target_slot_count == 0) {
    throw ConfigError("layout: either bays or target_slot_count must be set");
  }
  if (spec.bay_width_mm % (2 * spec.positions_per_bay) != 0) {
    throw ConfigError("layout.bay_width_mm must divide evenly into positions");
  }
  if (!(spec.inbound_x_fraction >= 0.0 && spec.inbound_x_fraction <= 1.0)) {
    throw ConfigError("layout.inbound_x_fraction must lie in [0, 1]");
  }
}

// Turns an aisle plan into slots, nav graph and footprint.
class GridBuilder {
 public:
  GridBuilder(const LayoutSpec& spec, std::vector<AislePlan> aisles, int bays,
              std::optional<Diagonal> diagonal, std::size_t outbound_aisle)
      : spec_(spec), plans_(std::move(aisles)), bays_(bays), diagonal_(diagonal),
        out_aisle_(outbound_aisle) {}

  Layout build() {
    Layout L;
    L.level_height_mm = spec_.level_height_mm;
    L.aisle_count = static_cast<int>(plans_.size());
    const std::int64_t rack_w =
        static_cast<std::int64_t>(spec_.deep_positions) * spec_.rack_depth_mm;
    const std::int64_t cross_w = spec_.cross_aisle_width_mm;
    yc_ = cross_w / 2;
    rack_y0_ = cross_w;
    rack_y1_ = rack_y0_ + static_cast<std::int64_t>(bays_) * spec_.bay_width_mm;

    // Horizontal placement of rows and aisles.
    std::int64_t x = 0;
    for (const auto& a : plans_) {
      if (a.left_row) x += rack_w;
      const std::int64_t ax0 = x;
      x += a.width;
      aisle_x0_.push_back(ax0);
      aisle_x1_.push_back(x);
      aisle_cx_.push_back(ax0 + a.width / 2);
      if (a.right_row) x += rack_w;
    }
    width_ = x;
    const std::int64_t height = rack_y1_ + spec_.top_clearance_mm;
    L.footprint.push_back(Rect{0, 0, width_, height});

    make_slot_cells(L);
    if (diagonal_) cut_diagonal(L);
    make_graph(L);
    return L;
  }

  std::int64_t rack_top() const { return rack_y1_; }

 private:
  void make_slot_cells(Layout& L) {
    const std::int64_t depth = spec_.rack_depth_mm;
    const std::int64_t pos_w = spec_.bay_width_mm / spec_.positions_per_bay;
    for (std::size_t ai = 0; ai < plans_.size(); ++ai) {
      const auto& plan = plans_[ai];
      for (int side = 0; side < 2; ++side) {
        if (side == 0 && !plan.left_row) continue;
        if (side == 1 && !plan.right_row) continue;
        for (const auto& sec : plan.sections) {
          for (int b = sec.bay_begin; b < sec.bay_end; ++b) {
            for (int p = 0; p < spec_.positions_per_bay; ++p) {
              const std::int64_t y0 = rack_y0_ + b * spec_.bay_width_mm + p * pos_w;
              const std::int64_t yc = y0 + pos_w / 2;
              for (int lv = 0; lv < sec.levels; ++lv) {
                const SlotId first = static_cast<SlotId>(L.slots.size());
                for (int d = spec_.deep_positions - 1; d >= 0; --d) {
                  Slot s;
                  s.id = static_cast<SlotId>(L.slots.size());
                  s.level = lv;
                  s.depth_index = d;
                  s.aisle = static_cast<int>(ai);
                  if (side == 0) {
                    s.cell = Rect{aisle_x0_[ai] - (d + 1) * depth, y0,
                                  aisle_x0_[ai] - d * depth, y0 + pos_w};
                    s.position = Point{aisle_x0_[ai], yc};
                  } else {
                    s.cell = Rect{aisle_x1_[ai] + d * depth, y0,
                                  aisle_x1_[ai] + (d + 1) * depth, y0 + pos_w};
                    s.position = Point{aisle_x1_[ai], yc};
                  }
                  L.slots.push_back(s);
                  p_section_.push_back(sec.p_section);
                }
                if (spec_.deep_positions == 2) {
                  L.slots[first].partner = first + 1;
                  L.slots[first + 1].partner = first;
                }
              }
            }
          }
        }
      }
    }
  }

  // Removes cells crossed by the V-shaped cross aisle and records where the
  // diagonals cross each aisle centerline.
  void cut_diagonal(Layout& L) {
    const double theta = diagonal_->angle_deg * std::numbers::pi / 180.0;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double ax = static_cast<double>(aisle_cx_[out_aisle_]);
    const double ay = static_cast<double>(yc_);
    const double half = plans_[out_aisle_].width / 2.0 - 0.5;

    auto crosses = [&](const Rect& r, double dx) {
      double lo = 1e300, hi = -1e300;
      bool ahead = false;
      for (auto [px, py] : {std::pair{r.x0, r.y0}, std::pair{r.x1, r.y0},
                            std::pair{r.x0, r.y1}, std::pair{r.x1, r.y1}}) {
        const double rx = static_cast<double>(px) - ax;
        const double ry = static_cast<double>(py) - ay;
        const double d = rx * s - ry * dx;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        if (rx * dx + ry * s >= 0.0) ahead = true;
      }
      if (!ahead) return false;
      // Rectangle overlaps the strip |d| < half.
      return lo < half && hi > -half;
    };

    std::vector<bool> keep(L.slots.size(), true);
    for (std::size_t i = 0; i < L.slots.size(); ++i) {
      const auto& r = L.slots[i].cell;
      // Right branch has direction (c, s); the left one (-c, s). For the
      // left branch the cross product sign flips, handled by passing -c.
      if (crosses(r, c) || crosses(r, -c)) keep[i] = false;
    }
    remove_slots(L, keep);

    for (std::size_t ai = 0; ai < plans_.size(); ++ai) {
      if (ai == out_aisle_) continue;
      const double dxa = static_cast<double>(aisle_cx_[ai]) - ax;
      if (c < 1e-12) continue;
      const double y = ay + std::abs(dxa) / c * s;
      if (y > static_cast<double>(rack_y1_)) continue;
      diag_y_.emplace_back(ai, std::llround(y));
    }
  }

  void remove_slots(Layout& L, const std::vector<bool>& keep) {
    std::vector<SlotId> remap(L.slots.size(), kNoSlot);
    std::vector<Slot> kept;
    std::vector<bool> kept_p;
    for (std::size_t i = 0; i < L.slots.size(); ++i) {
      if (!keep[i]) continue;
      remap[i] = static_cast<SlotId>(kept.size());
      kept.push_back(L.slots[i]);
      kept_p.push_back(p_section_[i]);
    }
    for (auto& s : kept) {
      s.id = remap[s.id];
      if (s.partner != kNoSlot) s.partner = remap[s.partner];
    }
    L.slots = std::move(kept);
    p_section_ = std::move(kept_p);
  }

  void make_graph(Layout& L) {
    auto& g = L.nav;
    std::vector<std::vector<std::int64_t>> ys(plans_.size());
    for (const auto& s : L.slots) ys[static_cast<std::size_t>(s.aisle)].push_back(s.position.y);
    for (auto [ai, y] : diag_y_) ys[ai].push_back(y);

    aisle_nodes_.resize(plans_.size());
    std::vector<NodeId> junction(plans_.size());
    for (std::size_t ai = 0; ai < plans_.size(); ++ai) {
      auto& v = ys[ai];
      v.push_back(yc_);
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      NodeId prev = 0;
      for (std::size_t k = 0; k < v.size(); ++k) {
        const NodeId n = g.add_node(Point{aisle_cx_[ai], v[k]});
        aisle_nodes_[ai].emplace_back(v[k], n);
        if (v[k] == yc_) junction[ai] = n;
        if (k > 0) g.add_edge(prev, n, plans_[ai].width, EdgeKind::Aisle);
        prev = n;
      }
    }
    for (std::size_t ai = 1; ai < plans_.size(); ++ai) {
      g.add_edge(junction[ai - 1], junction[ai], spec_.cross_aisle_width_mm,
                 EdgeKind::CrossAisle);
    }

    // Staging points on the bottom edge.
    const std::int64_t out_x = aisle_cx_[out_aisle_];
    L.outbound_staging = g.add_node(Point{out_x, 0});
    g.add_edge(L.outbound_staging, junction[out_aisle_], spec_.cross_aisle_width_mm,
               EdgeKind::Approach);

    const double want = spec_.inbound_x_fraction * static_cast<double>(width_);
    std::size_t in_aisle = 0;
    for (std::size_t ai = 0; ai < plans_.size(); ++ai) {
      if (std::abs(static_cast<double>(aisle_cx_[ai]) - want) <
          std::abs(static_cast<double>(aisle_cx_[in_aisle]) - want)) {
        in_aisle = ai;
      }
    }
    std::int64_t in_x = aisle_cx_[in_aisle];
    if (in_aisle == out_aisle_) in_x -= spec_.cross_aisle_width_mm / 2;
    L.inbound_staging = g.add_node(Point{in_x, 0});
    g.add_edge(L.inbound_staging, junction[in_aisle], spec_.cross_aisle_width_mm,
               EdgeKind::Approach);

    // V-shaped cross aisle: from the outbound junction outward on each side.
    if (diagonal_) {
      const std::int32_t w = plans_[out_aisle_].width;
      for (int dir : {-1, 1}) {
        NodeId prev = junction[out_aisle_];
        std::vector<std::pair<std::size_t, std::int64_t>> branch;
        for (auto [ai, y] : diag_y_) {
          const bool right = ai > out_aisle_;
          if ((dir > 0) == right) branch.emplace_back(ai, y);
        }
        std::sort(branch.begin(), branch.end(), [&](const auto& l, const auto& r) {
          return l.second < r.second;
        });
        for (auto [ai, y] : branch) {
          const NodeId n = node_at(ai, y);
          if (n != prev) g.add_edge(prev, n, w, EdgeKind::Diagonal);
          prev = n;
        }
      }
    }

    for (auto& s : L.slots) s.access_node = node_at(static_cast<std::size_t>(s.aisle), s.position.y);
  }

  NodeId node_at(std::size_t aisle, std::int64_t y) const {
    const auto& v = aisle_nodes_[aisle];
    auto it = std::lower_bound(v.begin(), v.end(), std::pair{y, NodeId{0}},
                               [](const auto& l, const auto& r) { return l.first < r.first; });
    if (it == v.end() || it->first != y) {
      throw LogicError(fmt::format("no aisle node at aisle {} y {}", aisle, y));
    }
    return it->second;
  }

 public:
  const std::vector<bool>& p_section() const { return p_section_; }

 private:
  const LayoutSpec& spec_;
  std::vector<AislePlan> plans_;
  int bays_;
  std::optional<Diagonal> diagonal_;
  std::size_t out_aisle_;
  std::int64_t yc_ = 0, rack_y0_ = 0, rack_y1_ = 0, width_ = 0;
  std::vector<std::int64_t> aisle_x0_, aisle_x1_, aisle_cx_;
  std::vector<bool> p_section_;
  std::vector<std::pair<std::size_t, std::int64_t>> diag_y_;
  std::vector<std::vector<std::pair<std::int64_t, NodeId>>> aisle_nodes_;
};

std::vector<AislePlan> uniform_plans(const LayoutSpec& spec, int bays) {
  const int n_aisles = (spec.rows + 1) / 2;
  std::vector<AislePlan> plans;
  for (int a = 0; a < n_aisles; ++a) {
    AislePlan p;
    p.width = spec.aisle_width_mm;
    p.right_row = (2 * a + 1) < spec.rows;
    p.sections.push_back(Section{0, bays, spec.levels, false});
    plans.push_back(std::move(p));
  }
  return plans;
}

std::size_t middle_aisle(std::size_t n) { return n / 2; }

int slots_per_bay_row(const LayoutSpec& spec) {
  return spec.positions_per_bay * spec.deep_positions * spec.levels;
}

int derive_bays(const LayoutSpec& spec) {
  if (spec.bays > 0) return spec.bays;
  const int per_bay = spec.rows * slots_per_bay_row(spec);
  return (spec.target_slot_count + per_bay - 1) / per_bay;
}

// Drops the slots farthest from outbound staging until `target` remain.
// Slots flagged in `protect` are never dropped.
void trim_to_target(Layout& L, int target, const std::vector<bool>& protect) {
  if (target <= 0 || static_cast<int>(L.slots.size()) <= target) return;
  const auto dist = outbound_distances(L);
  std::vector<SlotId> order(L.slots.size());
  std::iota(order.begin(), order.end(), SlotId{0});
  std::sort(order.begin(), order.end(), [&](SlotId a, SlotId b) {
    const auto& sa = L.slots[a];
    const auto& sb = L.slots[b];
    const auto da = dist[sa.access_node], db = dist[sb.access_node];
    if (da != db) return da > db;
    if (sa.level != sb.level) return sa.level > sb.level;
    return a > b;
  });
  std::size_t excess = L.slots.size() - static_cast<std::size_t>(target);
  std::vector<bool> keep(L.slots.size(), true);
  for (SlotId id : order) {
    if (excess == 0) break;
    if (!protect.empty() && protect[id]) continue;
    keep[id] = false;
    --excess;
  }
  std::vector<SlotId> remap(L.slots.size(), kNoSlot);
  std::vector<Slot> kept;
  for (std::size_t i = 0; i < L.slots.size(); ++i) {
    if (!keep[i]) continue;
    remap[i] = static_cast<SlotId>(kept.size());
    kept.push_back(L.slots[i]);
  }
  for (auto& s : kept) {
    s.id = remap[s.id];
    if (s.partner != kNoSlot) s.partner = remap[s.partner];
  }
  L.slots = std::move(kept);
}

void check_connected(const Layout& L) {
  const auto seen = L.nav.reachable_from(L.outbound_staging, 0);
  if (!seen[L.inbound_staging]) {
    throw ConfigError("layout: inbound staging cannot reach outbound staging");
  }
  for (const auto& s : L.slots) {
    if (!seen[s.access_node]) {
      throw ConfigError(fmt::format("layout: slot {} is not connected", s.id));
    }
  }
}

void require_target(const Layout& L, const LayoutSpec& spec) {
  if (spec.target_slot_count > 0 &&
      static_cast<int>(L.slots.size()) < spec.target_slot_count) {
    throw ConfigError(fmt::format(
        "layout: geometry yields {} slots, fewer than target_slot_count {}",
        L.slots.size(), spec.target_slot_count));
  }
}

}  // namespace

Layout build_conventional(const LayoutSpec& spec) {
  validate_common(spec);
  const int bays = derive_bays(spec);
  auto plans = uniform_plans(spec, bays);
  GridBuilder gb(spec, plans, bays, std::nullopt, middle_aisle(plans.size()));
  Layout L = gb.build();
  require_target(L, spec);
  trim_to_target(L, spec.target_slot_count, {});
  L.name = "conventional";
  L.variant = LayoutVariant::Conventional;
  L.zone_fractions = ZoneFractions{0.0, 0.0, 0.0};
  check_connected(L);
  return L;
}

Layout build_current(const LayoutSpec& spec) {
  Layout L = build_conventional(spec);
  L.name = "current";
  L.variant = LayoutVariant::Current;
  return L;
}

Layout build_flying_v(const LayoutSpec& spec) {
  validate_common(spec);
  if (!(spec.diagonal_angle_deg > 0.0 && spec.diagonal_angle_deg <= 90.0)) {
    throw ConfigError(fmt::format(
        "layout.diagonal_angle_deg {} must lie in (0, 90]; other angles leave "
        "the V disconnected from the aisles",
        spec.diagonal_angle_deg));
  }
  int bays = derive_bays(spec);
  const Diagonal diag{spec.diagonal_angle_deg};
  for (int attempt = 0; attempt < 10000; ++attempt, ++bays) {
    auto plans = uniform_plans(spec, bays);
    GridBuilder gb(spec, plans, bays, diag, middle_aisle(plans.size()));
    Layout L = gb.build();
    const bool enough = spec.target_slot_count == 0 ||
                        static_cast<int>(L.slots.size()) >= spec.target_slot_count;
    if (!enough && spec.bays > 0) require_target(L, spec);
    if (!enough) continue;
    trim_to_target(L, spec.target_slot_count, {});
    L.name = "flying_v";
    L.variant = LayoutVariant::FlyingV;
    L.zone_fractions = ZoneFractions{0.0, 0.0, 0.0};
    check_connected(L);
    return L;
  }
  throw ConfigError("layout: flying-V cannot reach target_slot_count");
}

void ZoneFractions::validate() const {
  if (p < 0 || e < 0 || s < 0 || std::abs(p + e + s - 1.0) > 1e-9) {
    throw ConfigError(fmt::format(
        "layout.zone_fractions ({}, {}, {}) must be nonnegative and sum to 1", p, e, s));
  }
}

Layout build_cpu(const LayoutSpec& spec) {
  validate_common(spec);
  const auto& zf = spec.zone_fractions;
  zf.validate();
  if (spec.target_slot_count <= 0) {
    throw ConfigError("layout.target_slot_count must be positive for cpu layouts");
  }
  if (spec.p_levels < 1 || spec.e_levels < 1) {
    throw ConfigError("layout.p_levels and layout.e_levels must be positive");
  }
  const int target = spec.target_slot_count;
  const int p_count = static_cast<int>(std::llround(target * zf.p));
  const int s_count = static_cast<int>(std::llround(target * zf.s));
  const int e_count = target - p_count - s_count;
  if (e_count < 0) throw ConfigError("layout.zone_fractions round to more slots than target");

  const int ground_per_bay = 2 * spec.positions_per_bay * spec.deep_positions;
  const std::int64_t rack_w = static_cast<std::int64_t>(spec.deep_positions) * spec.rack_depth_mm;

  // P section: wide aisles at the outbound end whose lower bays carry
  // p_levels; the ground level of those bays holds the P slots.
  int n_wide = spec.wide_aisles;
  if (n_wide <= 0) {
    // Minimise the mean staging distance of the P block (half width + height).
    double best = 1e300;
    for (int n = 1; n <= 64; ++n) {
      const int pb = std::max(1, (p_count + n * ground_per_bay - 1) / (n * ground_per_bay));
      if (spec.bays > 0 && pb > spec.bays) continue;
      const double w = n * static_cast<double>(spec.wide_aisle_width_mm + 2 * rack_w);
      const double cost = w / 4.0 + pb * static_cast<double>(spec.bay_width_mm) / 2.0;
      if (cost < best) {
        best = cost;
        n_wide = n;
      }
    }
  }
  if (n_wide <= 0) n_wide = 64;
  const int p_bays = p_count == 0 ? 0
                                  : (p_count + n_wide * ground_per_bay - 1) /
                                        (n_wide * ground_per_bay);
  if (spec.bays > 0 && p_bays > spec.bays) {
    throw ConfigError(fmt::format(
        "layout.zone_fractions: {} P slots requested but only {} ground positions exist",
        p_count, n_wide * spec.bays * ground_per_bay));
  }

  const int per_pos_lv = 2 * spec.positions_per_bay * spec.deep_positions;
  const std::int64_t flank_module = spec.aisle_width_mm + 2 * rack_w;
  const std::int64_t wide_module = spec.wide_aisle_width_mm + 2 * rack_w;

  // Pick the bay count and flank aisle count with the smallest footprint.
  int best_bays = -1, best_flank = 0;
  double best_area = 1e300;
  const int min_bays = std::max(1, spec.bays > 0 ? spec.bays : p_bays);
  const int max_bays = spec.bays > 0 ? spec.bays : p_bays + 200;
  for (int b = min_bays; b <= max_bays; ++b) {
    const long wide_slots = static_cast<long>(n_wide) *
                            (static_cast<long>(p_bays) * per_pos_lv * spec.p_levels +
                             static_cast<long>(b - p_bays) * per_pos_lv * spec.e_levels);
    const long rest = std::max(0L, static_cast<long>(target) - wide_slots);
    const long per_flank = static_cast<long>(b) * per_pos_lv * spec.e_levels;
    const int flank = static_cast<int>((rest + per_flank - 1) / per_flank);
    const double w = static_cast<double>(n_wide * wide_module + flank * flank_module);
    const double h = static_cast<double>(spec.cross_aisle_width_mm +
                                         static_cast<std::int64_t>(b) * spec.bay_width_mm +
                                         spec.top_clearance_mm);
    if (w * h < best_area) {
      best_area = w * h;
      best_bays = b;
      best_flank = flank;
    }
  }
  if (best_bays < 0) throw ConfigError("layout: no cpu geometry fits the spec");

  std::vector<AislePlan> plans;
  const int flank_left = best_flank / 2;
  const int flank_right = best_flank - flank_left;
  auto flank_plan = [&] {
    AislePlan p;
    p.width = spec.aisle_width_mm;
    p.sections.push_back(Section{0, best_bays, spec.e_levels, false});
    return p;
  };
  for (int i = 0; i < flank_left; ++i) plans.push_back(flank_plan());
  for (int i = 0; i < n_wide; ++i) {
    AislePlan p;
    p.width = spec.wide_aisle_width_mm;
    if (p_bays > 0) p.sections.push_back(Section{0, p_bays, spec.p_levels, true});
    if (best_bays > p_bays) {
      p.sections.push_back(Section{p_bays, best_bays, spec.e_levels, false});
    }
    plans.push_back(std::move(p));
  }
  for (int i = 0; i < flank_right; ++i) plans.push_back(flank_plan());
  const std::size_t out_aisle = static_cast<std::size_t>(flank_left + n_wide / 2);

  GridBuilder gb(spec, plans, best_bays, std::nullopt, out_aisle);
  Layout L = gb.build();
  const auto p_section = gb.p_section();

  // P: nearest ground slots of the P section.
  auto dist = outbound_distances(L);
  auto nearer = [&](SlotId a, SlotId b) {
    const auto& sa = L.slots[a];
    const auto& sb = L.slots[b];
    const auto da = dist[sa.access_node], db = dist[sb.access_node];
    if (da != db) return da < db;
    if (sa.level != sb.level) return sa.level < sb.level;
    return a < b;
  };
  std::vector<SlotId> ground;
  for (const auto& s : L.slots) {
    if (p_section[s.id] && s.level == 0) ground.push_back(s.id);
  }
  if (static_cast<int>(ground.size()) < p_count) {
    throw ConfigError(fmt::format(
        "layout.zone_fractions: {} P slots requested but only {} ground positions exist",
        p_count, ground.size()));
  }
  std::sort(ground.begin(), ground.end(), nearer);
  std::vector<bool> is_p(L.slots.size(), false);
  for (int i = 0; i < p_count; ++i) is_p[ground[static_cast<std::size_t>(i)]] = true;
  for (auto& s : L.slots) {
    if (is_p[s.id]) s.zone = Zone::P;
  }

  if (static_cast<int>(L.slots.size()) < target) require_target(L, spec);
  trim_to_target(L, target, is_p);

  dist = outbound_distances(L);
  std::vector<SlotId> rest;
  for (const auto& s : L.slots) {
    if (s.zone != Zone::P) rest.push_back(s.id);
  }
  std::sort(rest.begin(), rest.end(), nearer);
  for (std::size_t i = 0; i < rest.size(); ++i) {
    L.slots[rest[i]].zone = static_cast<int>(i) < s_count ? Zone::S : Zone::E;
  }

  L.name = "cpu";
  L.variant = LayoutVariant::Cpu;
  L.zone_fractions = zf;
  check_connected(L);
  return L;
}

Layout build_layout(LayoutVariant variant, const LayoutSpec& spec) {
  switch (variant) {
    case LayoutVariant::Conventional: return build_conventional(spec);
    case LayoutVariant::FlyingV: return build_flying_v(spec);
    case LayoutVariant::Cpu: return build_cpu(spec);
    case LayoutVariant::Current: return build_current(spec);
  }
  throw LogicError("unknown layout variant");
}

}  // namespace whsim
