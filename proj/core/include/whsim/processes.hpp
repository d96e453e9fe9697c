#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "whsim/model.hpp"
#include "whsim/rng.hpp"
#include "whsim/sim_engine.hpp"

namespace whsim {

struct CatalogConfig {
  int n_skus = 120;
  ClassSplit sku_shares{0.20, 0.30, 0.50};
  ClassSplit volume_shares{0.80, 0.15, 0.05};  // also the inbound class mix

  void validate() const;
  bool operator==(const CatalogConfig&) const = default;
};

struct InboundConfig {
  double sigma = 0.6;  // of the underlying normal
  std::optional<double> mu;  // unset: solved from the daily volume target
  double daily_volume_target = 2050.0;
  int truck_count_in = 10;
  std::vector<double> collar_weights{1, 1, 1, 1, 1, 1};  // collars 1..6
  double euro_full_share = 0.7;
  int consolidation_scan = 16;  // queue entries inspected per trip

  void validate() const;
  // mu such that the mean gap is day_length / daily_volume_target.
  double mu_for(double day_length_s) const;
  double mean_gap(double day_length_s) const;
  bool operator==(const InboundConfig&) const = default;
};

struct OutboundConfig {
  double takt_s = 1500.0;
  int skus_per_order_min = 12;
  int skus_per_order_max = 12;
  double line_mean = 4.45;  // pallets per line, normal, rounded, at least 1
  double line_sd = 1.2;
  int truck_count_out = 10;
  // Scale line quantities by class book stock over its target.
  bool stock_feedback = true;
  double feedback_min = 0.5;
  double feedback_max = 1.5;
  // Demand spike: line quantities multiplied by spike_factor for
  // spike_waves waves starting at spike_start_wave (negative = none).
  int spike_start_wave = -1;
  int spike_waves = 0;
  double spike_factor = 1.0;

  void validate() const;
  bool operator==(const OutboundConfig&) const = default;
};

// Stock held per class at t = 0, which is also the level that demand
// feedback steers towards.
struct InventoryConfig {
  int target_a = 480;
  int target_b = 360;
  int target_c = 600;

  int target(SkuClass c) const;
  void validate() const;
  bool operator==(const InventoryConfig&) const = default;
};

// Log-normal gaps from t = 0 until the horizon.
std::vector<double> arrival_times(const InboundConfig& cfg, double day_length_s,
                                  double horizon_s, Rng& rng);

// Rounded normal, truncated at 1.
int draw_line_quantity(double mean, double sd, Rng& rng);

// n distinct SKUs with inclusion probability n * weight (randomised
// systematic sampling). Throws ConfigError if some n * weight exceeds 1.
std::vector<SkuId> sample_skus(const SkuCatalog& catalog, int n, Rng& rng);

// Raw wave order before stock feedback: release at wave_index * takt.
Order generate_wave(const OutboundConfig& cfg, const SkuCatalog& catalog, Rng& sku_rng,
                    Rng& size_rng, int wave_index);

// Everything exogenous to the layout for one replication.
struct DemandTimeline {
  SkuCatalog catalog;
  std::vector<Pallet> initial;   // on hand at t = 0, ids 0..n-1
  std::vector<Pallet> arrivals;  // ascending time, ids continue after initial
  std::vector<Order> orders;     // one per wave, ascending release
  std::size_t dropped_lines = 0;  // lines with no book stock
};

DemandTimeline build_demand(const CatalogConfig& catalog_cfg, const InboundConfig& in,
                            const OutboundConfig& out, const InventoryConfig& stock,
                            const ReplicationPlan& plan, RngStreams& streams);

// Greedy load building: the first entry always goes, later entries join if
// they fit the remaining capacity and `joins(i)` agrees. At most scan_limit
// entries are inspected.
template <class Joins>
std::vector<std::size_t> consolidate_load(std::span<const int> collars, int capacity,
                                          std::size_t scan_limit, Joins&& joins) {
  std::vector<std::size_t> picked;
  if (collars.empty()) return picked;
  picked.push_back(0);
  int left = capacity - collars[0];
  const std::size_t n = std::min(collars.size(), scan_limit);
  for (std::size_t i = 1; i < n && left > 0; ++i) {
    if (collars[i] > left) continue;
    if (!joins(i)) continue;
    picked.push_back(i);
    left -= collars[i];
  }
  return picked;
}

}  // namespace whsim
