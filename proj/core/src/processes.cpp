#include "whsim/processes.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "whsim/errors.hpp"

namespace whsim {

void CatalogConfig::validate() const {
  if (n_skus < 3) throw ConfigError("catalog.n_skus must be >= 3");
  sku_shares.validate("catalog.sku_shares");
  volume_shares.validate("catalog.volume_shares");
}

void InboundConfig::validate() const {
  if (!(sigma >= 0.0)) throw ConfigError("inbound.sigma must be >= 0");
  if (!(daily_volume_target > 0.0)) {
    throw ConfigError("inbound.daily_volume_target must be positive");
  }
  if (truck_count_in < 1) throw ConfigError("inbound.truck_count_in must be >= 1");
  if (collar_weights.size() != static_cast<std::size_t>(kMaxCollars)) {
    throw ConfigError(fmt::format("inbound.collar_weights needs {} entries, got {}",
                                  kMaxCollars, collar_weights.size()));
  }
  double total = 0.0;
  for (double w : collar_weights) {
    if (!(w >= 0.0)) throw ConfigError("inbound.collar_weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("inbound.collar_weights must not all be zero");
  if (!(euro_full_share >= 0.0 && euro_full_share <= 1.0)) {
    throw ConfigError("inbound.euro_full_share must lie in [0, 1]");
  }
  if (consolidation_scan < 1) throw ConfigError("inbound.consolidation_scan must be >= 1");
}

double InboundConfig::mean_gap(double day_length_s) const {
  return day_length_s / daily_volume_target;
}

double InboundConfig::mu_for(double day_length_s) const {
  if (mu) return *mu;
  return std::log(mean_gap(day_length_s)) - sigma * sigma / 2.0;
}

void OutboundConfig::validate() const {
  if (!(takt_s > 0.0)) throw ConfigError("outbound.takt_s must be positive");
  if (skus_per_order_min < 1 || skus_per_order_max < skus_per_order_min) {
    throw ConfigError("outbound.skus_per_order_min/max must satisfy 1 <= min <= max");
  }
  if (!(line_mean > 0.0)) throw ConfigError("outbound.line_mean must be positive");
  if (!(line_sd >= 0.0)) throw ConfigError("outbound.line_sd must be >= 0");
  if (truck_count_out < 1) throw ConfigError("outbound.truck_count_out must be >= 1");
  if (!(feedback_min > 0.0 && feedback_min <= 1.0 && feedback_max >= 1.0)) {
    throw ConfigError("outbound.feedback_min must lie in (0, 1] and feedback_max >= 1");
  }
  if (spike_waves < 0) throw ConfigError("outbound.spike_waves must be >= 0");
  if (!(spike_factor > 0.0)) throw ConfigError("outbound.spike_factor must be positive");
}

int InventoryConfig::target(SkuClass c) const {
  switch (c) {
    case SkuClass::A: return target_a;
    case SkuClass::B: return target_b;
    case SkuClass::C: return target_c;
  }
  return 0;
}

void InventoryConfig::validate() const {
  if (target_a < 1 || target_b < 1 || target_c < 1) {
    throw ConfigError("inventory.target_a/b/c must be >= 1");
  }
}

std::vector<double> arrival_times(const InboundConfig& cfg, double day_length_s,
                                  double horizon_s, Rng& rng) {
  const double mu = cfg.mu_for(day_length_s);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(horizon_s / cfg.mean_gap(day_length_s) * 1.05) + 16);
  double t = 0.0;
  while (true) {
    t += rng.lognormal(mu, cfg.sigma);
    if (t >= horizon_s) break;
    out.push_back(t);
  }
  return out;
}

int draw_line_quantity(double mean, double sd, Rng& rng) {
  const double x = sd > 0.0 ? rng.normal(mean, sd) : mean;
  return std::max(1, static_cast<int>(std::lround(x)));
}

std::vector<SkuId> sample_skus(const SkuCatalog& catalog, int n, Rng& rng) {
  if (n < 1) return {};
  const auto total = static_cast<int>(catalog.skus.size());
  if (n > total) {
    throw ConfigError(fmt::format("cannot draw {} distinct SKUs from {}", n, total));
  }
  std::vector<SkuId> order;
  order.reserve(catalog.skus.size());
  for (auto cls : kAllClasses) {
    auto ids = catalog.skus_of(cls);
    for (std::size_t i = ids.size(); i > 1; --i) {
      std::swap(ids[i - 1], ids[rng.below(i)]);
    }
    order.insert(order.end(), ids.begin(), ids.end());
  }
  long double wsum = 0.0L;
  for (SkuId s : order) {
    const long double p = static_cast<long double>(n) * catalog.at(s).demand_weight;
    if (p > 1.0L + 1e-12L) {
      throw ConfigError(fmt::format(
          "outbound: {} SKUs per order gives SKU {} inclusion probability {:.3f} > 1", n, s,
          static_cast<double>(p)));
    }
    wsum += catalog.at(s).demand_weight;
  }
  const long double u = static_cast<long double>(rng.uniform());
  std::vector<SkuId> picked;
  picked.reserve(static_cast<std::size_t>(n));
  long double cum = 0.0L;
  int j = 0;
  for (SkuId s : order) {
    cum += static_cast<long double>(n) * catalog.at(s).demand_weight / wsum;
    if (j < n && u + j < cum) {
      picked.push_back(s);
      ++j;
    }
  }
  // Rounding can leave the last point just past the end.
  for (auto it = order.rbegin(); j < n && it != order.rend(); ++it) {
    if (std::find(picked.begin(), picked.end(), *it) == picked.end()) {
      picked.push_back(*it);
      ++j;
    }
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

Order generate_wave(const OutboundConfig& cfg, const SkuCatalog& catalog, Rng& sku_rng,
                    Rng& size_rng, int wave_index) {
  if (wave_index < 0) throw DomainError("wave_index must be >= 0");
  Order o;
  o.id = static_cast<OrderId>(wave_index);
  o.wave_index = wave_index;
  o.release_time = wave_index * cfg.takt_s;
  const int span = cfg.skus_per_order_max - cfg.skus_per_order_min;
  const int n = cfg.skus_per_order_min +
                (span > 0 ? static_cast<int>(sku_rng.below(static_cast<std::uint64_t>(span) + 1))
                          : 0);
  for (SkuId s : sample_skus(catalog, n, sku_rng)) {
    o.lines.push_back(OrderLine{s, draw_line_quantity(cfg.line_mean, cfg.line_sd, size_rng)});
  }
  return o;
}

namespace {

Pallet draw_pallet(PalletId id, SkuId sku, SkuClass cls, double t, const InboundConfig& in,
                   RngStreams& rs) {
  Pallet p;
  p.id = id;
  p.sku = sku;
  p.sku_class = cls;
  p.collars = kMinCollars + static_cast<int>(rs.collars.discrete(in.collar_weights));
  p.format = PalletFormat::of(rs.formats.uniform() < in.euro_full_share ? PalletKind::EuroFull
                                                                        : PalletKind::EuroHalf);
  p.arrival_time = t;
  return p;
}

}  // namespace

DemandTimeline build_demand(const CatalogConfig& catalog_cfg, const InboundConfig& in,
                            const OutboundConfig& out, const InventoryConfig& stock,
                            const ReplicationPlan& plan, RngStreams& rs) {
  catalog_cfg.validate();
  in.validate();
  out.validate();
  stock.validate();
  plan.validate();

  DemandTimeline d;
  d.catalog = build_catalog(catalog_cfg.n_skus, catalog_cfg.sku_shares,
                            catalog_cfg.volume_shares, rs.catalog);
  const auto& cat = d.catalog;
  const std::size_t n_sku = cat.skus.size();

  std::array<std::vector<SkuId>, 3> members;
  for (auto c : kAllClasses) members[index_of(c)] = cat.skus_of(c);

  // Book stock: pallets generated minus pallets committed to orders. It
  // depends only on the random streams, never on the layout.
  std::vector<long> book(n_sku, 0);
  std::array<long, 3> class_book{0, 0, 0};
  std::vector<double> sku_target(n_sku, 0.0);
  for (auto c : kAllClasses) {
    const auto& m = members[index_of(c)];
    for (SkuId s : m) sku_target[s] = static_cast<double>(stock.target(c)) / m.size();
  }

  PalletId next_id = 0;
  for (auto c : kAllClasses) {
    const auto& m = members[index_of(c)];
    for (int k = 0; k < stock.target(c); ++k) {
      const SkuId s = m[static_cast<std::size_t>(k) % m.size()];
      d.initial.push_back(draw_pallet(next_id++, s, c, 0.0, in, rs));
      ++book[s];
      ++class_book[index_of(c)];
    }
  }

  const auto times = arrival_times(in, plan.day_length_s, plan.horizon(), rs.arrivals);
  d.arrivals.reserve(times.size());
  std::size_t next_arrival = 0;
  auto admit_until = [&](double t_max) {
    while (next_arrival < times.size() && times[next_arrival] <= t_max) {
      const double t = times[next_arrival++];
      const SkuClass c = draw_sku_class(rs.classes.uniform(), catalog_cfg.volume_shares);
      // Most depleted SKU of the class against its share of the target.
      const auto& m = members[index_of(c)];
      SkuId pick = m.front();
      double worst = -1e300;
      for (SkuId s : m) {
        const double deficit = sku_target[s] - static_cast<double>(book[s]);
        if (deficit > worst || (deficit == worst && s < pick)) {
          worst = deficit;
          pick = s;
        }
      }
      d.arrivals.push_back(draw_pallet(next_id++, pick, c, t, in, rs));
      ++book[pick];
      ++class_book[index_of(c)];
    }
  };

  for (int w = 0; w * out.takt_s < plan.horizon(); ++w) {
    const double release = w * out.takt_s;
    admit_until(release);
    Order o = generate_wave(out, cat, rs.order_skus, rs.order_sizes, w);
    const bool spike = out.spike_start_wave >= 0 && w >= out.spike_start_wave &&
                       w < out.spike_start_wave + out.spike_waves;
    std::vector<OrderLine> kept;
    for (auto line : o.lines) {
      const SkuClass c = cat.at(line.sku).sku_class;
      double q = line.quantity;
      if (spike) q *= out.spike_factor;
      if (out.stock_feedback) {
        const double ratio = static_cast<double>(class_book[index_of(c)]) / stock.target(c);
        q *= std::clamp(ratio, out.feedback_min, out.feedback_max);
      }
      long qty = std::max(1L, std::lround(q));
      qty = std::min(qty, book[line.sku]);
      if (qty <= 0) {
        ++d.dropped_lines;
        continue;
      }
      line.quantity = static_cast<int>(qty);
      book[line.sku] -= qty;
      class_book[index_of(c)] -= qty;
      kept.push_back(line);
    }
    o.lines = std::move(kept);
    d.orders.push_back(std::move(o));
  }
  admit_until(plan.horizon());
  return d;
}

}  // namespace whsim
