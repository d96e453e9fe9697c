#include "whsim/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "whsim/errors.hpp"

namespace whsim {

void Scenario::validate() const {
  if (name.empty()) throw ConfigError("name must not be empty");
  check_compatible(policy, variant);
  vehicle.validate();
  plan.validate();
  catalog.validate();
  inbound.validate();
  outbound.validate();
  inventory.validate();
  policy_params.band_shares.validate("policy.band_shares");
  if (variant == LayoutVariant::Cpu) layout.zone_fractions.validate();
  if (vehicle.min_aisle_width_mm > layout.aisle_width_mm) {
    throw ConfigError(fmt::format(
        "layout.aisle_width_mm {} is narrower than vehicle.min_aisle_width_mm {}",
        layout.aisle_width_mm, vehicle.min_aisle_width_mm));
  }
  if (kMaxCollars > vehicle.capacity_collar_units) {
    throw ConfigError("vehicle.capacity_collar_units must hold the tallest pallet");
  }
}

Model::Model(Scenario scenario) : scenario_(std::move(scenario)) {
  scenario_.validate();
  layout_ = build_layout(scenario_.variant, scenario_.layout);
  costs_ = CostTable(layout_.nav, scenario_.vehicle);
  slotting_ = std::make_unique<Slotting>(scenario_.policy, scenario_.policy_params, layout_);
  area_ = compute_area(layout_);
}

ReplicationRow ReplicationResult::row() const {
  ReplicationRow r;
  r.replication = replication;
  r.seed = seed;
  r.throughput_s_mean = throughput_s_mean;
  r.fte = fte;
  r.on_time_pct = on_time_pct;
  r.area_m2 = area_m2;
  r.avg_busy_trucks = avg_busy_trucks;
  r.completed = completed;
  r.incomplete = incomplete;
  return r;
}

namespace {

enum class TaskKind : std::uint8_t { Store, Pick, RelocPick, RelocStore, Stage };

struct Task {
  TaskKind kind;
  PalletId pallet;
  SlotId slot;
  std::uint32_t order;
  std::uint32_t truck;
};

struct Truck {
  bool inbound = true;
  NodeId home = 0;
  bool busy = false;
};

struct OrderState {
  const Order* order = nullptr;
  std::vector<int> unallocated;  // per line
  int total = 0;
  int staged = 0;
  bool counted = false;  // inside the KPI window
  std::size_t outcome = 0;
};

class Replication {
 public:
  Replication(const Model& m, int rep, const RunOptions& opt)
      : m_(m),
        sc_(m.scenario()),
        L_(m.layout()),
        costs_(m.costs()),
        opt_(opt),
        rs_(sc_.master_seed, rep),
        demand_(build_demand(sc_.catalog, sc_.inbound, sc_.outbound, sc_.inventory, sc_.plan,
                             rs_)),
        inv_(m.slotting(), demand_.catalog.skus.size()),
        usage_(sc_.plan.warm_up_end(), sc_.plan.horizon()),
        usage_in_(sc_.plan.warm_up_end(), sc_.plan.horizon()),
        usage_out_(sc_.plan.warm_up_end(), sc_.plan.horizon()) {
    res_.scenario = sc_.name;
    res_.replication = rep;
    res_.seed = sc_.master_seed;
    res_.area_m2 = m.area_m2();
    res_.dropped_lines = demand_.dropped_lines;

    pallets_.reserve(demand_.initial.size() + demand_.arrivals.size());
    for (const auto& p : demand_.initial) pallets_.push_back(p);
    for (const auto& p : demand_.arrivals) pallets_.push_back(p);

    for (int i = 0; i < sc_.inbound.truck_count_in; ++i) {
      trucks_.push_back(Truck{true, L_.inbound_staging, false});
    }
    for (int i = 0; i < sc_.outbound.truck_count_out; ++i) {
      trucks_.push_back(Truck{false, L_.outbound_staging, false});
    }
    const auto b = L_.bounds();
    x0_ = b.x0;
    width_ = std::max<std::int64_t>(1, b.width());
  }

  ReplicationResult run() {
    const auto& plan = sc_.plan;
    if (plan.n_days == 0) {
      res_.empty_window = true;
      res_.diagnostics.push_back("EmptyWindow: zero days after warm-up");
    }
    place_initial_stock();

    if (!demand_.arrivals.empty()) q_.schedule(demand_.arrivals[0].arrival_time, EventKind::PalletArrival, 0);
    if (!demand_.orders.empty()) q_.schedule(demand_.orders[0].release_time, EventKind::WaveRelease, 0);
    const int days = plan.warm_up_days + plan.n_days;
    for (int d = 0; d < days; ++d) {
      q_.schedule((d + 1) * plan.day_length_s, EventKind::EndOfDay, static_cast<std::uint32_t>(d));
    }
    for (int k = 0; k < opt_.samples; ++k) {
      q_.schedule(plan.horizon() * (k + 0.5) / opt_.samples, EventKind::Sample,
                  static_cast<std::uint32_t>(k));
    }

    const double horizon = plan.horizon();
    while (!q_.empty() && q_.peek().time <= horizon) {
      const Event e = q_.pop();
      handle(e);
      dispatch();
    }
    finish();
    return std::move(res_);
  }

 private:
  // --- timing ---------------------------------------------------------

  double service_s(SlotId s) const {
    const auto& slot = L_.slots[s];
    const auto& v = sc_.vehicle;
    double t = slot.zone == Zone::P ? v.floor_handling_s : v.handling_s;
    if (slot.depth_index == 1) t += v.deep_reach_s;
    t += 2.0 * slot.level * (L_.level_height_mm / 1000.0) / v.lift_speed_mps;
    return t;
  }

  double travel_s(NodeId a, NodeId b) const { return costs_.seconds(a, b); }

  int band_of(SlotId s) const {
    const auto x = L_.slots[s].position.x - x0_;
    return static_cast<int>(std::clamp<std::int64_t>(3 * x / width_, 0, 2));
  }

  // --- bookkeeping ----------------------------------------------------

  void log(const LogRecord& r) {
    if (opt_.record_log) res_.log.add(r);
  }

  void set_busy(std::size_t t, bool busy) {
    if (trucks_[t].busy == busy) throw LogicError("truck state toggled twice");
    trucks_[t].busy = busy;
    const int d = busy ? 1 : -1;
    busy_all_ += d;
    usage_.set(q_.now(), busy_all_);
    if (trucks_[t].inbound) {
      busy_in_ += d;
      usage_in_.set(q_.now(), busy_in_);
    } else {
      busy_out_ += d;
      usage_out_.set(q_.now(), busy_out_);
    }
  }

  std::uint32_t add_task(TaskKind k, PalletId p, SlotId s, std::uint32_t order,
                         std::uint32_t truck) {
    tasks_.push_back(Task{k, p, s, order, truck});
    return static_cast<std::uint32_t>(tasks_.size() - 1);
  }

  void note_stored(const Pallet& p, SlotId s) {
    const auto& slot = L_.slots[s];
    const auto ci = index_of(p.sku_class);
    ++res_.stored_by_class[ci];
    const bool tall = p.collars > sc_.policy_params.p_zone_max_collars;
    if (slot.zone == Zone::P && slot.level == 0 && tall) ++res_.tall_in_p;
    Zone home = Zone::S;
    if (p.sku_class == SkuClass::A) home = tall ? Zone::Unzoned : Zone::P;
    if (p.sku_class == SkuClass::C) home = Zone::E;
    if (slot.zone == home) ++res_.stored_by_class_in_home_zone[ci];
    const auto stock = inv_.occupied_count();
    res_.peak_stock = std::max<std::uint64_t>(res_.peak_stock, stock);
  }

  void place_initial_stock() {
    for (const auto& p : demand_.initial) {
      SlotId s;
      try {
        s = assign_slot(p, inv_, rs_.policy_ties);
      } catch (const StorageFull& e) {
        throw ConfigError(fmt::format("inventory: initial stock does not fit ({})", e.what()));
      }
      inv_.place(s, p.id, p.sku);
      pallets_[p.id].stored_time = 0.0;
      pallets_[p.id].slot = s;
      note_stored(p, s);
      ++generated_;
      log(LogRecord{.time = 0.0, .kind = LogKind::Store, .pallet = p.id, .slot = s, .sku = p.sku});
    }
  }

  // --- events ---------------------------------------------------------

  void handle(const Event& e) {
    switch (e.kind) {
      case EventKind::PalletArrival: on_arrival(e.a); break;
      case EventKind::WaveRelease: on_wave(e.a); break;
      case EventKind::TaskComplete: on_task(tasks_[e.a]); break;
      case EventKind::TruckFree: set_busy(e.a, false); break;
      case EventKind::EndOfDay: on_end_of_day(static_cast<int>(e.a)); break;
      case EventKind::Sample: on_sample(); break;
    }
  }

  void on_arrival(std::uint32_t i) {
    const Pallet& p = demand_.arrivals[i];
    in_queue_.push_back(p.id);
    ++generated_;
    ++res_.arrivals;
    ++res_.arrivals_by_class[index_of(p.sku_class)];
    ++arrivals_today_;
    log(LogRecord{.time = q_.now(), .kind = LogKind::Arrival, .pallet = p.id, .sku = p.sku,
                  .value = p.collars, .cls = to_string(p.sku_class)[0]});
    if (i + 1 < demand_.arrivals.size()) {
      q_.schedule(demand_.arrivals[i + 1].arrival_time, EventKind::PalletArrival, i + 1);
    }
  }

  void on_wave(std::uint32_t w) {
    const Order& o = demand_.orders[w];
    ++res_.waves;
    if (o.release_time != w * sc_.outbound.takt_s) ++res_.waves_off_takt;
    OrderState st;
    st.order = &o;
    for (const auto& line : o.lines) {
      st.unallocated.push_back(line.quantity);
      st.total += line.quantity;
    }
    st.counted = o.release_time >= sc_.plan.warm_up_end() && st.total > 0;
    if (st.counted) {
      st.outcome = res_.orders.size();
      res_.orders.push_back(OrderOutcome{o.id, o.release_time, -1.0, st.total});
    }
    log(LogRecord{.time = q_.now(), .kind = LogKind::Release, .order = o.id,
                  .value = static_cast<int>(o.lines.size())});
    orders_.push_back(std::move(st));
    if (o.lines.empty()) {
      ++res_.empty_orders;
    } else {
      open_.push_back(w);
    }
    if (w + 1 < demand_.orders.size()) {
      q_.schedule(demand_.orders[w + 1].release_time, EventKind::WaveRelease, w + 1);
    }
  }

  void on_task(const Task& t) {
    Pallet& p = pallets_[t.pallet];
    switch (t.kind) {
      case TaskKind::Store:
        inv_.store(t.slot, t.pallet, p.sku);
        --on_inbound_;
        p.stored_time = q_.now();
        p.slot = t.slot;
        note_stored(p, t.slot);
        log(LogRecord{.time = q_.now(), .kind = LogKind::Store, .pallet = t.pallet,
                      .slot = t.slot, .truck = t.truck, .sku = p.sku});
        break;
      case TaskKind::Pick: {
        inv_.remove(t.slot);
        ++removals_;
        ++on_outbound_;
        p.slot.reset();
        if (q_.now() < demand_.orders[t.order].release_time) ++res_.early_retrievals;
        log(LogRecord{.time = q_.now(), .kind = LogKind::Pick, .pallet = t.pallet,
                      .order = t.order, .slot = t.slot, .truck = t.truck, .sku = p.sku});
        break;
      }
      case TaskKind::RelocPick:
        inv_.remove(t.slot);
        ++removals_;
        ++relocating_;
        log(LogRecord{.time = q_.now(), .kind = LogKind::Relocate, .pallet = t.pallet,
                      .order = t.order, .slot = t.slot, .truck = t.truck, .sku = p.sku});
        break;
      case TaskKind::RelocStore:
        inv_.store(t.slot, t.pallet, p.sku);
        --relocating_;
        p.slot = t.slot;
        log(LogRecord{.time = q_.now(), .kind = LogKind::Store, .pallet = t.pallet,
                      .slot = t.slot, .truck = t.truck, .sku = p.sku});
        break;
      case TaskKind::Stage: {
        --on_outbound_;
        ++shipped_;
        auto& st = orders_[t.order];
        ++st.staged;
        log(LogRecord{.time = q_.now(), .kind = LogKind::Stage, .pallet = t.pallet,
                      .order = t.order, .truck = t.truck});
        if (st.staged == st.total) {
          if (st.counted) {
            auto& out = res_.orders[st.outcome];
            out.completion = q_.now();
            // Summed in event order, as a log reducer would.
            done_tp_.push_back(out.completion - out.release);
            done_sum_ += done_tp_.back();
          }
          log(LogRecord{.time = q_.now(), .kind = LogKind::Complete, .order = t.order,
                        .value = st.total});
        }
        break;
      }
    }
  }

  void on_end_of_day(int day) {
    if (day >= sc_.plan.warm_up_days) res_.daily_arrivals.push_back(arrivals_today_);
    arrivals_today_ = 0;
  }

  void on_sample() {
    ++res_.samples_taken;
    const std::uint64_t accounted = inv_.occupied_count() + in_queue_.size() + on_inbound_ +
                                    on_outbound_ + relocating_ + shipped_;
    if (accounted != generated_) {
      ++res_.conservation_failures;
      res_.diagnostics.push_back(fmt::format(
          "conservation at t={:.0f}: generated {} but accounted {}", q_.now(), generated_,
          accounted));
    }
    try {
      inv_.check_invariants();
    } catch (const LogicError& e) {
      ++res_.invariant_failures;
      res_.diagnostics.push_back(e.what());
    }
  }

  // --- dispatch -------------------------------------------------------

  std::size_t idle_truck(bool inbound) const {
    for (std::size_t i = 0; i < trucks_.size(); ++i) {
      if (trucks_[i].inbound == inbound && !trucks_[i].busy) return i;
    }
    return trucks_.size();
  }

  void dispatch() {
    while (!in_queue_.empty()) {
      if (blocked_at_removals_ && *blocked_at_removals_ == removals_) break;
      const std::size_t t = idle_truck(true);
      if (t == trucks_.size()) break;
      if (!start_inbound(t)) break;
    }
    while (!open_.empty()) {
      const std::size_t t = idle_truck(false);
      if (t == trucks_.size()) break;
      bool started = false;
      for (std::size_t k = 0; k < open_.size() && !started; ++k) {
        started = start_outbound(t, open_[k]);
      }
      if (!started) break;
      open_.erase(std::remove_if(open_.begin(), open_.end(),
                                 [&](std::uint32_t o) {
                                   const auto& u = orders_[o].unallocated;
                                   return std::all_of(u.begin(), u.end(),
                                                      [](int x) { return x == 0; });
                                 }),
                  open_.end());
    }
  }

  bool start_inbound(std::size_t truck) {
    const std::size_t scan =
        std::min(in_queue_.size(), static_cast<std::size_t>(sc_.inbound.consolidation_scan));
    std::vector<int> collars(scan);
    for (std::size_t i = 0; i < scan; ++i) collars[i] = pallets_[in_queue_[i]].collars;

    const Pallet& first = pallets_[in_queue_[0]];
    SlotId first_slot;
    try {
      first_slot = assign_slot(first, inv_, rs_.policy_ties);
    } catch (const StorageFull&) {
      blocked_at_removals_ = removals_;
      ++res_.storage_full_waits;
      return false;
    }
    blocked_at_removals_.reset();
    inv_.reserve(first_slot, first.id);
    const int band = band_of(first_slot);
    std::vector<SlotId> slot_of(scan, kNoSlot);
    slot_of[0] = first_slot;

    const auto chosen = consolidate_load(
        collars, sc_.vehicle.capacity_collar_units, scan, [&](std::size_t i) {
          const Pallet& p = pallets_[in_queue_[i]];
          SlotId s;
          try {
            s = assign_slot(p, inv_, rs_.policy_ties);
          } catch (const StorageFull&) {
            return false;
          }
          if (band_of(s) != band) return false;
          inv_.reserve(s, p.id);
          slot_of[i] = s;
          return true;
        });

    std::vector<InboundTask> load;
    int load_collars = 0;
    for (std::size_t i : chosen) {
      load.push_back(InboundTask{in_queue_[i], slot_of[i]});
      load_collars += collars[i];
    }
    for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) {
      in_queue_.erase(in_queue_.begin() + static_cast<std::ptrdiff_t>(*it));
    }
    load = sequence_inbound_tasks(std::move(load), L_);

    const auto tid = static_cast<std::uint32_t>(truck);
    const double t0 = q_.now();
    double t = t0;
    NodeId at = trucks_[truck].home;
    for (const auto& task : load) {
      const NodeId dest = L_.slots[task.slot].access_node;
      t += travel_s(at, dest) + service_s(task.slot);
      at = dest;
      q_.schedule(t, EventKind::TaskComplete, add_task(TaskKind::Store, task.pallet, task.slot, kNone, tid));
    }
    t += travel_s(at, trucks_[truck].home);
    on_inbound_ += load.size();
    set_busy(truck, true);
    q_.schedule(t, EventKind::TruckFree, tid);
    ++res_.trips_in;
    res_.max_trip_collars = std::max(res_.max_trip_collars, load_collars);
    log(LogRecord{.time = t0, .kind = LogKind::Trip, .truck = tid, .value = load_collars, .end = t});
    return true;
  }

  struct Candidate {
    SlotId slot = kNoSlot;
    std::size_t line = 0;
  };

  // Nearest retrievable pallet of any open line that fits the capacity left.
  Candidate nearest_pick(const OrderState& st, NodeId at, int cap) const {
    Candidate best;
    std::int64_t best_cost = CostTable::kInf;
    const auto& lines = st.order->lines;
    for (std::size_t li = 0; li < lines.size(); ++li) {
      if (st.unallocated[li] == 0) continue;
      for (SlotId s : inv_.slots_of(lines[li].sku)) {
        if (!inv_.retrievable(s)) continue;
        if (pallets_[inv_.occupant(s)].collars > cap) continue;
        const auto c = costs_.cost_mm(at, L_.slots[s].access_node);
        if (c < best_cost || (c == best_cost && s < best.slot)) {
          best = Candidate{s, li};
          best_cost = c;
        }
      }
    }
    return best;
  }

  bool start_outbound(std::size_t truck, std::uint32_t oi) {
    OrderState& st = orders_[oi];
    const auto& lines = st.order->lines;
    const NodeId home = trucks_[truck].home;
    const auto tid = static_cast<std::uint32_t>(truck);
    int cap = sc_.vehicle.capacity_collar_units;
    const double t0 = q_.now();
    double t = t0;
    NodeId at = home;
    std::vector<PalletId> carried;

    auto pick = [&](SlotId s, std::size_t li) {
      const PalletId p = inv_.occupant(s);
      inv_.lock(s);
      --st.unallocated[li];
      cap -= pallets_[p].collars;
      const NodeId dest = L_.slots[s].access_node;
      t += travel_s(at, dest) + service_s(s);
      at = dest;
      q_.schedule(t, EventKind::TaskComplete, add_task(TaskKind::Pick, p, s, oi, tid));
      carried.push_back(p);
    };

    while (cap > 0) {
      const Candidate c = nearest_pick(st, at, cap);
      if (c.slot == kNoSlot) {
        if (carried.empty() && relocate_then_pick(st, oi, tid, at, t, cap, carried)) continue;
        break;
      }
      const NodeId dest = L_.slots[c.slot].access_node;
      // Stay out only while the next pallet is no farther than from staging.
      if (!carried.empty() && costs_.cost_mm(at, dest) > costs_.cost_mm(home, dest)) break;
      pick(c.slot, c.line);
    }
    if (carried.empty()) return false;

    t += travel_s(at, home);
    int trip_collars = 0;
    for (PalletId p : carried) {
      trip_collars += pallets_[p].collars;
      q_.schedule(t, EventKind::TaskComplete, add_task(TaskKind::Stage, p, kNoSlot, oi, tid));
    }
    set_busy(truck, true);
    q_.schedule(t, EventKind::TruckFree, tid);
    ++res_.trips_out;
    res_.max_trip_collars = std::max(res_.max_trip_collars, trip_collars);
    log(LogRecord{.time = t0, .kind = LogKind::Trip, .order = oi, .truck = tid,
                  .value = trip_collars, .end = t});
    (void)lines;
    return true;
  }

  // Moves the front pallet of a blocked pair aside, then takes the rear.
  bool relocate_then_pick(OrderState& st, std::uint32_t oi, std::uint32_t tid, NodeId& at,
                          double& t, int& cap, std::vector<PalletId>& carried) {
    const auto& lines = st.order->lines;
    SlotId rear = kNoSlot;
    std::size_t line = 0;
    std::int64_t best_cost = CostTable::kInf;
    for (std::size_t li = 0; li < lines.size(); ++li) {
      if (st.unallocated[li] == 0) continue;
      const SlotId r = blocked_candidate(lines[li].sku, inv_, at, costs_);
      if (r == kNoSlot || pallets_[inv_.occupant(r)].collars > cap) continue;
      const auto c = costs_.cost_mm(at, L_.slots[r].access_node);
      if (c < best_cost || (c == best_cost && r < rear)) {
        rear = r;
        line = li;
        best_cost = c;
      }
    }
    if (rear == kNoSlot) return false;
    const SlotId front = L_.slots[rear].partner;
    const PalletId moved = inv_.occupant(front);
    SlotId target;
    try {
      target = relocation_target(front, pallets_[moved], inv_, costs_);
    } catch (const StorageFull&) {
      return false;
    }
    inv_.lock(front);
    inv_.reserve(target, moved);
    const NodeId fa = L_.slots[front].access_node;
    t += travel_s(at, fa) + service_s(front);
    q_.schedule(t, EventKind::TaskComplete, add_task(TaskKind::RelocPick, moved, front, oi, tid));
    const NodeId ta = L_.slots[target].access_node;
    t += travel_s(fa, ta) + service_s(target);
    q_.schedule(t, EventKind::TaskComplete, add_task(TaskKind::RelocStore, moved, target, oi, tid));
    at = ta;
    ++res_.relocations;

    const PalletId p = inv_.occupant(rear);
    inv_.lock(rear);
    --st.unallocated[line];
    cap -= pallets_[p].collars;
    const NodeId ra = L_.slots[rear].access_node;
    t += travel_s(at, ra) + service_s(rear);
    at = ra;
    q_.schedule(t, EventKind::TaskComplete, add_task(TaskKind::Pick, p, rear, oi, tid));
    carried.push_back(p);
    return true;
  }

  // --- wrap-up --------------------------------------------------------

  void finish() {
    const double horizon = sc_.plan.horizon();
    if (q_.empty() && q_.now() < horizon && !open_.empty()) {
      res_.diagnostics.push_back(fmt::format(
          "starved: event queue empty at t={:.0f} with {} open orders", q_.now(), open_.size()));
    }
    usage_.set(horizon, busy_all_);
    usage_in_.set(horizon, busy_in_);
    usage_out_.set(horizon, busy_out_);
    res_.shipped = shipped_;
    res_.final_stock = inv_.occupied_count();

    for (const auto& o : res_.orders) res_.incomplete += o.completion < 0.0 ? 1 : 0;
    const auto& tp = done_tp_;
    res_.completed = tp.size();
    if (!tp.empty()) {
      res_.throughput_s_mean = done_sum_ / static_cast<double>(tp.size());
      res_.throughput_s_max = *std::max_element(tp.begin(), tp.end());
      res_.on_time_pct = on_time_pct(tp, sc_.outbound.takt_s);
    } else if (!res_.empty_window) {
      res_.diagnostics.push_back("EmptyWindow: no completed orders after warm-up");
    }
    if (!res_.empty_window) {
      res_.avg_busy_trucks = usage_.average();
      res_.avg_busy_inbound = usage_in_.average();
      res_.avg_busy_outbound = usage_out_.average();
      res_.fte = required_fte(res_.avg_busy_trucks);
    }
  }

  const Model& m_;
  const Scenario& sc_;
  const Layout& L_;
  const CostTable& costs_;
  RunOptions opt_;
  RngStreams rs_;
  DemandTimeline demand_;
  InventoryState inv_;
  EventQueue q_;
  UsageMeter usage_, usage_in_, usage_out_;
  ReplicationResult res_;

  std::vector<Pallet> pallets_;
  std::deque<PalletId> in_queue_;
  std::vector<Truck> trucks_;
  std::vector<OrderState> orders_;
  std::vector<std::uint32_t> open_;
  std::vector<Task> tasks_;

  std::int64_t x0_ = 0, width_ = 1;
  int busy_all_ = 0, busy_in_ = 0, busy_out_ = 0;
  std::uint64_t generated_ = 0, on_inbound_ = 0, on_outbound_ = 0, relocating_ = 0,
                shipped_ = 0, removals_ = 0;
  std::optional<std::uint64_t> blocked_at_removals_;
  int arrivals_today_ = 0;
  std::vector<double> done_tp_;
  double done_sum_ = 0.0;
};

}  // namespace

ReplicationResult run_replication(const Model& model, int replication, const RunOptions& options) {
  Replication r(model, replication, options);
  return r.run();
}

std::vector<ReplicationResult> run_scenario(const Model& model, int threads,
                                            const RunOptions& options) {
  const int n = model.scenario().plan.replications;
  std::vector<ReplicationResult> out(static_cast<std::size_t>(n));
  threads = std::clamp(threads, 1, n);
  if (threads == 1) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = run_replication(model, i, options);
    return out;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          out[static_cast<std::size_t>(i)] = run_replication(model, i, options);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

KpiReport make_report(const Model& model, const std::vector<ReplicationResult>& results) {
  KpiReport rep;
  rep.scenario = model.scenario().name;
  rep.layout = to_string(model.scenario().variant);
  rep.policy = to_string(model.scenario().policy);
  for (const auto& r : results) rep.rows.push_back(r.row());
  return rep;
}

}  // namespace whsim
