#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "whsim/rng.hpp"

namespace whsim {

using SkuId = std::uint32_t;
using PalletId = std::uint32_t;
using SlotId = std::uint32_t;
using NodeId = std::uint32_t;
using OrderId = std::uint32_t;

inline constexpr int kMinCollars = 1;
inline constexpr int kMaxCollars = 6;
inline constexpr int kCollarHeightMm = 200;

enum class SkuClass : std::uint8_t { A = 0, B = 1, C = 2 };
inline constexpr std::array<SkuClass, 3> kAllClasses{SkuClass::A, SkuClass::B,
                                                     SkuClass::C};

const char* to_string(SkuClass c);
inline std::size_t index_of(SkuClass c) { return static_cast<std::size_t>(c); }

enum class PalletKind : std::uint8_t { EuroFull, EuroHalf };

struct PalletFormat {
  PalletKind kind = PalletKind::EuroFull;
  int length_mm = 1200;
  int width_mm = 800;

  static PalletFormat of(PalletKind kind);
  bool operator==(const PalletFormat&) const = default;
};

const char* to_string(PalletKind k);

int pallet_height_mm(int collars);

struct Pallet {
  PalletId id = 0;
  SkuId sku = 0;
  SkuClass sku_class = SkuClass::A;
  PalletFormat format;
  int collars = 1;
  double arrival_time = 0.0;
  std::optional<double> stored_time;
  std::optional<SlotId> slot;

  int height_mm() const { return pallet_height_mm(collars); }
};

struct OrderLine {
  SkuId sku = 0;
  int quantity = 1;
  bool operator==(const OrderLine&) const = default;
};

struct Order {
  OrderId id = 0;
  int wave_index = 0;
  double release_time = 0.0;
  std::vector<OrderLine> lines;
  std::optional<double> completion_time;

  int total_pallets() const;
};

// Fractions for classes A, B and C, in that order.
struct ClassSplit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double share(SkuClass cls) const;
  // Throws ConfigError unless all parts are nonnegative and sum to 1 (1e-9).
  void validate(const std::string& what) const;
  bool operator==(const ClassSplit&) const = default;
};

struct SkuInfo {
  SkuId id = 0;
  SkuClass sku_class = SkuClass::A;
  double demand_weight = 0.0;
};

struct SkuCatalog {
  std::vector<SkuInfo> skus;  // indexed by SkuId
  ClassSplit class_split;     // share of SKUs per class

  const SkuInfo& at(SkuId id) const { return skus.at(id); }
  std::vector<SkuId> skus_of(SkuClass cls) const;
  double class_weight(SkuClass cls) const;
};

// Class for a uniform sample u in [0,1): A below split.a, B below
// split.a + split.b, C otherwise.
SkuClass draw_sku_class(double u, const ClassSplit& split);

// Assigns ceil(n * share) SKUs to A and B (C takes the remainder) and spreads
// each class's volume share evenly over its SKUs. The rng only shuffles which
// ids land in which class.
SkuCatalog build_catalog(int n_skus, const ClassSplit& class_share_of_skus,
                         const ClassSplit& demand_share_of_volume, Rng& rng);

}  // namespace whsim
