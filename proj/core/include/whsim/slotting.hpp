#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "whsim/layout.hpp"
#include "whsim/model.hpp"
#include "whsim/rng.hpp"
#include "whsim/routing.hpp"

namespace whsim {

enum class PolicyKind : std::uint8_t { Random, ClassDistance, FlyingVRandom, FlyingVAbc, CpuZone };
const char* to_string(PolicyKind p);
PolicyKind parse_policy_kind(const std::string& s);

// Throws ConfigError when the policy cannot run on the layout variant.
void check_compatible(PolicyKind policy, LayoutVariant variant);

struct PolicyParams {
  int p_zone_max_collars = 4;
  ClassSplit band_shares{0.2, 0.3, 0.5};  // ClassDistance band widths
  bool operator==(const PolicyParams&) const = default;
};

// Outbound distance of every slot's access node, computed once per layout.
class DistanceRank {
 public:
  explicit DistanceRank(const Layout& layout);
  double meters(SlotId slot) const { return static_cast<double>(mm_.at(slot)) / 1000.0; }
  std::int64_t mm(SlotId slot) const { return mm_.at(slot); }

 private:
  std::vector<std::int64_t> mm_;
};

// Immutable per (layout, policy) tables: slot groups and preference order.
class Slotting {
 public:
  Slotting(PolicyKind policy, PolicyParams params, const Layout& layout);

  PolicyKind policy() const { return policy_; }
  const PolicyParams& params() const { return params_; }
  const Layout& layout() const { return *layout_; }
  const DistanceRank& distances() const { return dist_; }

  int group_count() const { return group_count_; }
  int group_of(SlotId s) const { return group_[s]; }
  // Position of the slot in the policy's preference order (lower is better).
  std::uint32_t rank_of(SlotId s) const { return rank_[s]; }
  SlotId slot_at_rank(std::uint32_t r) const { return by_rank_[r]; }
  // ClassDistance band of a slot, or -1 for other policies.
  int band_of(SlotId s) const;

 private:
  PolicyKind policy_;
  PolicyParams params_;
  const Layout* layout_;
  DistanceRank dist_;
  int group_count_ = 1;
  std::vector<int> group_;
  std::vector<std::uint32_t> rank_;
  std::vector<SlotId> by_rank_;
};

enum class SlotState : std::uint8_t { Free, Reserved, Occupied };

// Slot occupancy, per-SKU pallet index and free-slot indices. Owned by one
// replication.
class InventoryState {
 public:
  InventoryState(const Slotting& slotting, std::size_t sku_count);

  SlotState state(SlotId s) const { return state_[s]; }
  PalletId occupant(SlotId s) const { return occupant_[s]; }
  SkuId sku_at(SlotId s) const { return sku_[s]; }
  bool locked(SlotId s) const { return locked_[s]; }

  // Free, and storing here neither buries a pending rear delivery nor
  // lands behind something.
  bool admissible(SlotId s) const;
  // Occupied and reachable without moving another pallet.
  bool retrievable(SlotId s) const;

  void reserve(SlotId s, PalletId p);
  void unreserve(SlotId s);
  // Completes a reservation.
  void store(SlotId s, PalletId p, SkuId sku);
  // Places directly into a free slot (initial stock).
  void place(SlotId s, PalletId p, SkuId sku);
  PalletId remove(SlotId s);
  // Marks an occupied slot as claimed by a pending retrieval or relocation.
  void lock(SlotId s);
  void unlock(SlotId s);

  const std::vector<SlotId>& slots_of(SkuId sku) const { return by_sku_.at(sku); }
  std::size_t stock_of(SkuId sku) const { return by_sku_.at(sku).size(); }
  std::size_t occupied_count() const { return occupied_; }
  std::size_t reserved_count() const { return reserved_; }
  std::size_t free_count() const { return free_list_.size(); }
  std::size_t slot_count() const { return state_.size(); }
  const Slotting& slotting() const { return *slotting_; }

  // Lowest-ranked admissible free slot of a group for a pallet with the
  // given collar count, or kNoSlot.
  SlotId first_free(int group, int collars, int min_level = 0) const;
  // Uniform over admissible free slots, or kNoSlot.
  SlotId random_free(int collars, Rng& rng) const;
  // Nearest admissible free slot of a group by route cost from a node.
  SlotId nearest_free(int group, int collars, NodeId from, const CostTable& costs) const;

  // Throws LogicError if the occupancy map and SKU index disagree.
  void check_invariants() const;

 private:
  void free_insert(SlotId s);
  void free_erase(SlotId s);
  bool fits(SlotId s, int collars) const;

  const Slotting* slotting_;
  std::vector<SlotState> state_;
  std::vector<PalletId> occupant_;
  std::vector<SkuId> sku_;
  std::vector<std::uint8_t> locked_;
  std::vector<std::vector<SlotId>> by_sku_;
  std::vector<std::uint32_t> sku_pos_;  // slot -> index within by_sku_
  std::vector<std::set<std::uint32_t>> free_by_group_;  // ranks
  std::vector<SlotId> free_list_;
  std::vector<std::uint32_t> free_pos_;
  std::size_t occupied_ = 0;
  std::size_t reserved_ = 0;
};

// Chooses a storage slot for an arriving pallet; does not reserve it.
// Throws StorageFull.
SlotId assign_slot(const Pallet& pallet, const InventoryState& inv, Rng& rng);

// Nearest retrievable, unlocked slot holding the SKU. Throws StockOut with
// blocked() set when stock exists but only behind other pallets or claimed.
SlotId select_pallet_for_line(SkuId sku, const InventoryState& inv, NodeId truck_node,
                              const CostTable& costs);

// A blocked rear slot of the SKU whose front pallet can be moved, nearest
// first, or kNoSlot.
SlotId blocked_candidate(SkuId sku, const InventoryState& inv, NodeId truck_node,
                         const CostTable& costs);

// Nearest admissible free slot for relocating `pallet` out of `from`: same
// group first, then the groups its class may use under the policy, in the
// placement order. Throws StorageFull.
SlotId relocation_target(SlotId from, const Pallet& pallet, const InventoryState& inv,
                         const CostTable& costs);

}  // namespace whsim
