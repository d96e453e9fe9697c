#include "whsim/slotting.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "whsim/errors.hpp"

namespace whsim {

const char* to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::Random: return "random";
    case PolicyKind::ClassDistance: return "class_distance";
    case PolicyKind::FlyingVRandom: return "flying_v_random";
    case PolicyKind::FlyingVAbc: return "flying_v_abc";
    case PolicyKind::CpuZone: return "cpu_zone";
  }
  return "?";
}

PolicyKind parse_policy_kind(const std::string& s) {
  for (auto p : {PolicyKind::Random, PolicyKind::ClassDistance, PolicyKind::FlyingVRandom,
                 PolicyKind::FlyingVAbc, PolicyKind::CpuZone}) {
    if (s == to_string(p)) return p;
  }
  throw ConfigError(fmt::format("unknown policy '{}'", s));
}

void check_compatible(PolicyKind policy, LayoutVariant variant) {
  const bool fv = policy == PolicyKind::FlyingVRandom || policy == PolicyKind::FlyingVAbc;
  if (fv && variant != LayoutVariant::FlyingV) {
    throw ConfigError(fmt::format("policy {} requires a flying_v layout, got {}",
                                  to_string(policy), to_string(variant)));
  }
  if (policy == PolicyKind::CpuZone && variant != LayoutVariant::Cpu) {
    throw ConfigError(fmt::format("policy cpu_zone requires a cpu layout, got {}",
                                  to_string(variant)));
  }
}

DistanceRank::DistanceRank(const Layout& layout) {
  const auto d = outbound_distances(layout);
  mm_.reserve(layout.slots.size());
  for (const auto& s : layout.slots) mm_.push_back(d[s.access_node]);
}

namespace {

bool class_banded(PolicyKind p) {
  return p == PolicyKind::ClassDistance || p == PolicyKind::FlyingVAbc;
}

// CPU groups: zone x (ground, upper).
constexpr int kCpuGroups = 6;
int cpu_group(Zone z, int level) {
  const int zi = z == Zone::P ? 0 : z == Zone::E ? 1 : 2;
  return zi * 2 + (level > 0 ? 1 : 0);
}
int cpu_group(Zone z, bool upper) { return cpu_group(z, upper ? 1 : 0); }

}  // namespace

Slotting::Slotting(PolicyKind policy, PolicyParams params, const Layout& layout)
    : policy_(policy), params_(params), layout_(&layout), dist_(layout) {
  check_compatible(policy, layout.variant);
  params_.band_shares.validate("policy.band_shares");
  if (params_.p_zone_max_collars < kMinCollars || params_.p_zone_max_collars > kMaxCollars) {
    throw ConfigError(fmt::format("policy.p_zone_max_collars must be in [{}, {}], got {}",
                                  kMinCollars, kMaxCollars, params_.p_zone_max_collars));
  }
  const std::size_t n = layout.slots.size();
  by_rank_.resize(n);
  std::iota(by_rank_.begin(), by_rank_.end(), SlotId{0});
  const bool level_first = policy == PolicyKind::CpuZone;
  std::sort(by_rank_.begin(), by_rank_.end(), [&](SlotId a, SlotId b) {
    const auto& sa = layout.slots[a];
    const auto& sb = layout.slots[b];
    if (level_first && sa.level != sb.level) return sa.level < sb.level;
    if (dist_.mm(a) != dist_.mm(b)) return dist_.mm(a) < dist_.mm(b);
    if (sa.level != sb.level) return sa.level < sb.level;
    return a < b;
  });
  rank_.resize(n);
  for (std::uint32_t r = 0; r < n; ++r) rank_[by_rank_[r]] = r;

  group_.assign(n, 0);
  if (class_banded(policy)) {
    // Quantile cuts of the distance order; rank order already sorts by distance.
    group_count_ = 3;
    const auto cut_a = static_cast<std::uint32_t>(std::llround(params_.band_shares.a * n));
    const auto cut_b = static_cast<std::uint32_t>(
        std::llround((params_.band_shares.a + params_.band_shares.b) * n));
    for (SlotId s = 0; s < n; ++s) group_[s] = rank_[s] < cut_a ? 0 : rank_[s] < cut_b ? 1 : 2;
  } else if (policy == PolicyKind::CpuZone) {
    group_count_ = kCpuGroups;
    for (const auto& s : layout.slots) {
      if (s.zone == Zone::Unzoned) throw ConfigError("cpu_zone policy: layout has unzoned slots");
      group_[s.id] = cpu_group(s.zone, s.level);
    }
  }
}

int Slotting::band_of(SlotId s) const { return class_banded(policy_) ? group_[s] : -1; }

InventoryState::InventoryState(const Slotting& slotting, std::size_t sku_count)
    : slotting_(&slotting) {
  const std::size_t n = slotting.layout().slots.size();
  state_.assign(n, SlotState::Free);
  occupant_.assign(n, 0);
  sku_.assign(n, 0);
  locked_.assign(n, 0);
  sku_pos_.assign(n, 0);
  by_sku_.resize(sku_count);
  free_by_group_.resize(static_cast<std::size_t>(slotting.group_count()));
  free_pos_.assign(n, kNoSlot);
  free_list_.reserve(n);
  for (SlotId s = 0; s < n; ++s) free_insert(s);
}

bool InventoryState::admissible(SlotId s) const {
  if (state_[s] != SlotState::Free) return false;
  const auto& slot = slotting_->layout().slots[s];
  if (slot.partner == kNoSlot) return true;
  if (slot.depth_index == 1) return state_[slot.partner] == SlotState::Free;
  // Front: do not bury a pending delivery or a pending pick behind it.
  const auto rear = slot.partner;
  return state_[rear] != SlotState::Reserved && !locked_[rear];
}

bool InventoryState::retrievable(SlotId s) const {
  if (state_[s] != SlotState::Occupied || locked_[s]) return false;
  const auto& slot = slotting_->layout().slots[s];
  return slot.depth_index == 0 || slot.partner == kNoSlot ||
         state_[slot.partner] == SlotState::Free;
}

void InventoryState::free_insert(SlotId s) {
  if (free_pos_[s] != kNoSlot) return;
  free_pos_[s] = static_cast<std::uint32_t>(free_list_.size());
  free_list_.push_back(s);
  free_by_group_[static_cast<std::size_t>(slotting_->group_of(s))].insert(slotting_->rank_of(s));
}

void InventoryState::free_erase(SlotId s) {
  const auto pos = free_pos_[s];
  if (pos == kNoSlot) return;
  const SlotId last = free_list_.back();
  free_list_[pos] = last;
  free_pos_[last] = pos;
  free_list_.pop_back();
  free_pos_[s] = kNoSlot;
  free_by_group_[static_cast<std::size_t>(slotting_->group_of(s))].erase(slotting_->rank_of(s));
}

bool InventoryState::fits(SlotId s, int collars) const {
  const auto& slot = slotting_->layout().slots[s];
  if (collars > slot.max_collars) return false;
  return !(slotting_->policy() == PolicyKind::CpuZone && slot.zone == Zone::P &&
           collars > slotting_->params().p_zone_max_collars);
}

void InventoryState::reserve(SlotId s, PalletId p) {
  if (!admissible(s)) throw LogicError(fmt::format("reserve: slot {} is not admissible", s));
  state_[s] = SlotState::Reserved;
  occupant_[s] = p;
  ++reserved_;
  free_erase(s);
}

void InventoryState::unreserve(SlotId s) {
  if (state_[s] != SlotState::Reserved) throw LogicError("unreserve: slot not reserved");
  state_[s] = SlotState::Free;
  --reserved_;
  free_insert(s);
}

void InventoryState::store(SlotId s, PalletId p, SkuId sku) {
  if (state_[s] != SlotState::Reserved || occupant_[s] != p) {
    throw LogicError(fmt::format("store: slot {} not reserved for pallet {}", s, p));
  }
  --reserved_;
  state_[s] = SlotState::Occupied;
  sku_[s] = sku;
  sku_pos_[s] = static_cast<std::uint32_t>(by_sku_.at(sku).size());
  by_sku_[sku].push_back(s);
  ++occupied_;
}

void InventoryState::place(SlotId s, PalletId p, SkuId sku) {
  reserve(s, p);
  store(s, p, sku);
}

PalletId InventoryState::remove(SlotId s) {
  if (state_[s] != SlotState::Occupied) {
    throw LogicError(fmt::format("remove: slot {} is not occupied", s));
  }
  auto& v = by_sku_[sku_[s]];
  const SlotId last = v.back();
  v[sku_pos_[s]] = last;
  sku_pos_[last] = sku_pos_[s];
  v.pop_back();
  state_[s] = SlotState::Free;
  locked_[s] = 0;
  --occupied_;
  free_insert(s);
  return occupant_[s];
}

void InventoryState::lock(SlotId s) {
  if (state_[s] != SlotState::Occupied || locked_[s]) {
    throw LogicError(fmt::format("lock: slot {} is not an unclaimed stored pallet", s));
  }
  locked_[s] = 1;
}

void InventoryState::unlock(SlotId s) { locked_[s] = 0; }

SlotId InventoryState::first_free(int group, int collars, int min_level) const {
  const auto& slots = slotting_->layout().slots;
  for (auto r : free_by_group_.at(static_cast<std::size_t>(group))) {
    const SlotId s = slotting_->slot_at_rank(r);
    if (slots[s].level < min_level || !fits(s, collars)) continue;
    if (admissible(s)) return s;
  }
  return kNoSlot;
}

SlotId InventoryState::random_free(int collars, Rng& rng) const {
  if (free_list_.empty()) return kNoSlot;
  // Rejection first; fall back to an exact scan when most free slots are
  // blocked rears.
  for (int i = 0; i < 32; ++i) {
    const SlotId s = free_list_[rng.below(free_list_.size())];
    if (admissible(s) && fits(s, collars)) return s;
  }
  std::vector<SlotId> ok;
  for (SlotId s : free_list_) {
    if (admissible(s) && fits(s, collars)) ok.push_back(s);
  }
  if (ok.empty()) return kNoSlot;
  std::sort(ok.begin(), ok.end());
  return ok[rng.below(ok.size())];
}

SlotId InventoryState::nearest_free(int group, int collars, NodeId from,
                                    const CostTable& costs) const {
  const auto& slots = slotting_->layout().slots;
  SlotId best = kNoSlot;
  std::int64_t best_cost = CostTable::kInf;
  for (auto r : free_by_group_.at(static_cast<std::size_t>(group))) {
    const SlotId s = slotting_->slot_at_rank(r);
    if (!admissible(s) || !fits(s, collars)) continue;
    const auto c = costs.cost_mm(from, slots[s].access_node);
    if (c < best_cost || (c == best_cost && s < best)) {
      best = s;
      best_cost = c;
    }
  }
  return best;
}

void InventoryState::check_invariants() const {
  std::size_t occ = 0, res = 0, indexed = 0;
  for (SlotId s = 0; s < state_.size(); ++s) {
    if (state_[s] == SlotState::Occupied) {
      ++occ;
      const auto& v = by_sku_.at(sku_[s]);
      if (sku_pos_[s] >= v.size() || v[sku_pos_[s]] != s) {
        throw LogicError(fmt::format("inventory: slot {} missing from SKU index", s));
      }
    } else {
      if (locked_[s]) throw LogicError(fmt::format("inventory: empty slot {} is locked", s));
      if (state_[s] == SlotState::Reserved) ++res;
    }
    const bool listed = free_pos_[s] != kNoSlot;
    if (listed != (state_[s] == SlotState::Free)) {
      throw LogicError(fmt::format("inventory: free index wrong for slot {}", s));
    }
  }
  for (const auto& v : by_sku_) indexed += v.size();
  if (occ != occupied_ || indexed != occ || res != reserved_) {
    throw LogicError(fmt::format("inventory: counts disagree (occupied {} / {}, indexed {})",
                                 occ, occupied_, indexed));
  }
}

namespace {

using Tiers = std::vector<std::vector<int>>;

// Groups a pallet may use, in order of preference. Slots within one tier
// compete on rank (placement) or distance (relocation).
Tiers placement_tiers(const Pallet& pallet, const Slotting& sl) {
  switch (sl.policy()) {
    case PolicyKind::Random:
    case PolicyKind::FlyingVRandom: {
      std::vector<int> all(static_cast<std::size_t>(sl.group_count()));
      for (int g = 0; g < sl.group_count(); ++g) all[static_cast<std::size_t>(g)] = g;
      return {all};
    }
    case PolicyKind::ClassDistance:
    case PolicyKind::FlyingVAbc: {
      // Own band, then the others by band distance.
      const int own = static_cast<int>(index_of(pallet.sku_class));
      Tiers t{{own}};
      for (int d = 1; d <= 2; ++d) {
        for (int b : {own - d, own + d}) {
          if (b >= 0 && b <= 2) t.push_back({b});
        }
      }
      return t;
    }
    case PolicyKind::CpuZone: break;
  }
  const int P0 = cpu_group(Zone::P, false), P1 = cpu_group(Zone::P, true);
  const int E0 = cpu_group(Zone::E, false), E1 = cpu_group(Zone::E, true);
  const int S0 = cpu_group(Zone::S, false), S1 = cpu_group(Zone::S, true);
  const bool tall = pallet.collars > sl.params().p_zone_max_collars;
  Tiers t;
  switch (pallet.sku_class) {
    case SkuClass::A:
      if (!tall) {
        t = {{P0, P1}, {S0, S1}};
      } else {
        t = {{S1, E0, E1}, {S0}};
      }
      break;
    case SkuClass::B: t = {{S0, S1}}; break;
    case SkuClass::C: t = {{E0, E1}, {S0, S1}}; break;
  }
  // Last resort: any free slot the pallet fits (tall pallets never fit P).
  t.push_back({P0, P1, E0, E1, S0, S1});
  return t;
}

// Lowest-ranked admissible slot over several groups.
SlotId best_of(const InventoryState& inv, const std::vector<int>& groups, int collars) {
  SlotId best = kNoSlot;
  for (int g : groups) {
    const SlotId s = inv.first_free(g, collars);
    if (s == kNoSlot) continue;
    if (best == kNoSlot || inv.slotting().rank_of(s) < inv.slotting().rank_of(best)) best = s;
  }
  return best;
}

SlotId assign_tiered(const Pallet& pallet, const InventoryState& inv) {
  for (const auto& tier : placement_tiers(pallet, inv.slotting())) {
    const SlotId s = best_of(inv, tier, pallet.collars);
    if (s != kNoSlot) return s;
  }
  throw StorageFull(fmt::format("class {}", to_string(pallet.sku_class)),
                    fmt::format("no admissible slot for class {} pallet {} ({} collars)",
                                to_string(pallet.sku_class), pallet.id, pallet.collars));
}

}  // namespace

SlotId assign_slot(const Pallet& pallet, const InventoryState& inv, Rng& rng) {
  switch (inv.slotting().policy()) {
    case PolicyKind::Random:
    case PolicyKind::FlyingVRandom: {
      const SlotId s = inv.random_free(pallet.collars, rng);
      if (s == kNoSlot) {
        throw StorageFull("layout", fmt::format("no admissible slot for pallet {}", pallet.id));
      }
      return s;
    }
    case PolicyKind::ClassDistance:
    case PolicyKind::FlyingVAbc:
    case PolicyKind::CpuZone: return assign_tiered(pallet, inv);
  }
  throw LogicError("unknown policy");
}

SlotId select_pallet_for_line(SkuId sku, const InventoryState& inv, NodeId truck_node,
                              const CostTable& costs) {
  const auto& slots = inv.slotting().layout().slots;
  const auto& held = inv.slots_of(sku);
  SlotId best = kNoSlot;
  std::int64_t best_cost = CostTable::kInf;
  for (SlotId s : held) {
    if (!inv.retrievable(s)) continue;
    const auto c = costs.cost_mm(truck_node, slots[s].access_node);
    if (best == kNoSlot || c < best_cost || (c == best_cost && s < best)) {
      best = s;
      best_cost = c;
    }
  }
  if (best != kNoSlot) return best;
  if (held.empty()) throw StockOut(false, fmt::format("sku {} out of stock", sku));
  throw StockOut(true, fmt::format("sku {}: {} pallets stored, none reachable", sku,
                                   held.size()));
}

SlotId blocked_candidate(SkuId sku, const InventoryState& inv, NodeId truck_node,
                         const CostTable& costs) {
  const auto& slots = inv.slotting().layout().slots;
  SlotId best = kNoSlot;
  std::int64_t best_cost = CostTable::kInf;
  for (SlotId s : inv.slots_of(sku)) {
    const auto& slot = slots[s];
    if (inv.locked(s) || slot.depth_index != 1 || slot.partner == kNoSlot) continue;
    const SlotId f = slot.partner;
    if (inv.state(f) != SlotState::Occupied || inv.locked(f)) continue;
    const auto c = costs.cost_mm(truck_node, slot.access_node);
    if (best == kNoSlot || c < best_cost || (c == best_cost && s < best)) {
      best = s;
      best_cost = c;
    }
  }
  return best;
}

SlotId relocation_target(SlotId from, const Pallet& pallet, const InventoryState& inv,
                         const CostTable& costs) {
  const auto& sl = inv.slotting();
  const NodeId node = sl.layout().slots[from].access_node;
  SlotId s = inv.nearest_free(sl.group_of(from), pallet.collars, node, costs);
  if (s != kNoSlot) return s;
  for (const auto& tier : placement_tiers(pallet, sl)) {
    SlotId best = kNoSlot;
    std::int64_t best_cost = CostTable::kInf;
    for (int g : tier) {
      const SlotId c = inv.nearest_free(g, pallet.collars, node, costs);
      if (c == kNoSlot) continue;
      const auto cost = costs.cost_mm(node, sl.layout().slots[c].access_node);
      if (best == kNoSlot || cost < best_cost || (cost == best_cost && c < best)) {
        best = c;
        best_cost = cost;
      }
    }
    if (best != kNoSlot) return best;
  }
  throw StorageFull("layout", "no free slot for relocation");
}

}  // namespace whsim
