#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "whsim/kpi.hpp"
#include "whsim/layout.hpp"
#include "whsim/processes.hpp"
#include "whsim/routing.hpp"
#include "whsim/sim_engine.hpp"
#include "whsim/slotting.hpp"

namespace whsim {

struct Scenario {
  std::string name = "scenario";
  LayoutVariant variant = LayoutVariant::Conventional;
  LayoutSpec layout;
  PolicyKind policy = PolicyKind::Random;
  PolicyParams policy_params;
  CatalogConfig catalog;
  InboundConfig inbound;
  OutboundConfig outbound;
  InventoryConfig inventory;
  VehicleProfile vehicle;
  ReplicationPlan plan;
  std::uint64_t master_seed = 20240601;

  // Throws ConfigError on the first invalid setting, naming its key.
  void validate() const;
  bool operator==(const Scenario&) const = default;
};

// Geometry and lookup tables of one scenario, shared read-only by its
// replications.
class Model {
 public:
  explicit Model(Scenario scenario);
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;

  const Scenario& scenario() const { return scenario_; }
  const Layout& layout() const { return layout_; }
  const CostTable& costs() const { return costs_; }
  const Slotting& slotting() const { return *slotting_; }
  double area_m2() const { return area_; }

 private:
  Scenario scenario_;
  Layout layout_;
  CostTable costs_;
  std::unique_ptr<Slotting> slotting_;
  double area_ = 0.0;
};

struct RunOptions {
  bool record_log = false;
  int samples = 100;  // conservation checks spread over the horizon
};

struct OrderOutcome {
  OrderId id = 0;
  double release = 0.0;
  double completion = -1.0;  // negative when still open at the horizon
  int pallets = 0;
};

struct ReplicationResult {
  std::string scenario;
  int replication = 0;
  std::uint64_t seed = 0;

  // KPI window: orders released after warm-up.
  std::vector<OrderOutcome> orders;
  std::uint64_t completed = 0;
  std::uint64_t incomplete = 0;
  double throughput_s_mean = 0.0;
  double throughput_s_max = 0.0;
  double on_time_pct = 0.0;
  double avg_busy_trucks = 0.0;
  double avg_busy_inbound = 0.0;
  double avg_busy_outbound = 0.0;
  int fte = 0;
  double area_m2 = 0.0;
  bool empty_window = false;

  // Demand fidelity.
  std::vector<int> daily_arrivals;  // days after warm-up
  std::array<std::uint64_t, 3> arrivals_by_class{0, 0, 0};
  std::uint64_t arrivals = 0;
  std::uint64_t waves = 0;
  std::uint64_t waves_off_takt = 0;
  std::uint64_t shipped = 0;

  // Conservation and rule checks.
  int samples_taken = 0;
  int conservation_failures = 0;
  int invariant_failures = 0;
  int max_trip_collars = 0;
  std::uint64_t early_retrievals = 0;
  std::uint64_t trips_in = 0;
  std::uint64_t trips_out = 0;
  std::uint64_t relocations = 0;
  std::uint64_t storage_full_waits = 0;
  std::uint64_t dropped_lines = 0;
  std::uint64_t empty_orders = 0;
  std::uint64_t tall_in_p = 0;
  std::array<std::uint64_t, 3> stored_by_class{0, 0, 0};
  std::array<std::uint64_t, 3> stored_by_class_in_home_zone{0, 0, 0};
  std::uint64_t final_stock = 0;
  std::uint64_t peak_stock = 0;

  std::vector<std::string> diagnostics;
  EventLog log;

  ReplicationRow row() const;
};

ReplicationResult run_replication(const Model& model, int replication,
                                  const RunOptions& options = {});

// Runs every replication of the scenario plan, in parallel when threads > 1.
std::vector<ReplicationResult> run_scenario(const Model& model, int threads = 1,
                                            const RunOptions& options = {});

KpiReport make_report(const Model& model, const std::vector<ReplicationResult>& results);

}  // namespace whsim
