#include "whsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "whsim/errors.hpp"

namespace whsim {

const char* to_string(SkuClass c) {
  switch (c) {
    case SkuClass::A: return "A";
    case SkuClass::B: return "B";
    case SkuClass::C: return "C";
  }
  return "?";
}

const char* to_string(PalletKind k) {
  return k == PalletKind::EuroFull ? "EuroFull" : "EuroHalf";
}

PalletFormat PalletFormat::of(PalletKind kind) {
  if (kind == PalletKind::EuroFull) return {kind, 1200, 800};
  return {kind, 800, 600};
}

int pallet_height_mm(int collars) {
  if (collars < kMinCollars || collars > kMaxCollars) {
    throw DomainError(fmt::format("collar count {} outside [{}, {}]", collars,
                                  kMinCollars, kMaxCollars));
  }
  return collars * kCollarHeightMm;
}

int Order::total_pallets() const {
  int n = 0;
  for (const auto& l : lines) n += l.quantity;
  return n;
}

double ClassSplit::share(SkuClass cls) const {
  switch (cls) {
    case SkuClass::A: return a;
    case SkuClass::B: return b;
    case SkuClass::C: return c;
  }
  return 0.0;
}

void ClassSplit::validate(const std::string& what) const {
  if (a < 0.0 || b < 0.0 || c < 0.0) {
    throw ConfigError(fmt::format("{}: fractions must be nonnegative", what));
  }
  if (std::abs(a + b + c - 1.0) > 1e-9) {
    throw ConfigError(
        fmt::format("{}: fractions sum to {} instead of 1", what, a + b + c));
  }
}

std::vector<SkuId> SkuCatalog::skus_of(SkuClass cls) const {
  std::vector<SkuId> out;
  for (const auto& s : skus) {
    if (s.sku_class == cls) out.push_back(s.id);
  }
  return out;
}

double SkuCatalog::class_weight(SkuClass cls) const {
  double w = 0.0;
  for (const auto& s : skus) {
    if (s.sku_class == cls) w += s.demand_weight;
  }
  return w;
}

SkuClass draw_sku_class(double u, const ClassSplit& split) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw DomainError(fmt::format("class draw {} outside [0, 1)", u));
  }
  if (u < split.a) return SkuClass::A;
  if (u < split.a + split.b) return SkuClass::B;
  return SkuClass::C;
}

SkuCatalog build_catalog(int n_skus, const ClassSplit& class_share_of_skus,
                         const ClassSplit& demand_share_of_volume, Rng& rng) {
  if (n_skus < 3) throw ConfigError("catalog needs at least 3 SKUs");
  class_share_of_skus.validate("catalog.sku_shares");
  demand_share_of_volume.validate("catalog.volume_shares");

  const auto n = static_cast<double>(n_skus);
  const int count_a = static_cast<int>(std::ceil(n * class_share_of_skus.a - 1e-9));
  const int count_b = static_cast<int>(std::ceil(n * class_share_of_skus.b - 1e-9));
  const int count_c = n_skus - count_a - count_b;
  if (count_c < 0) {
    throw ConfigError("catalog: class shares leave no room for class C");
  }
  const std::array<int, 3> counts{count_a, count_b, count_c};
  for (SkuClass cls : kAllClasses) {
    if (counts[index_of(cls)] == 0 && demand_share_of_volume.share(cls) > 0.0) {
      throw ConfigError(fmt::format(
          "catalog: class {} has no SKUs but a demand share of {}",
          to_string(cls), demand_share_of_volume.share(cls)));
    }
  }

  // Fisher-Yates on the ids; the first count_a ids become A, and so on.
  std::vector<SkuId> ids(static_cast<std::size_t>(n_skus));
  std::iota(ids.begin(), ids.end(), SkuId{0});
  for (std::size_t i = ids.size() - 1; i > 0; --i) {
    std::swap(ids[i], ids[rng.below(i + 1)]);
  }

  SkuCatalog cat;
  cat.class_split = class_share_of_skus;
  cat.skus.resize(ids.size());
  std::size_t k = 0;
  for (SkuClass cls : kAllClasses) {
    const int cnt = counts[index_of(cls)];
    const double w = cnt > 0 ? demand_share_of_volume.share(cls) / cnt : 0.0;
    for (int j = 0; j < cnt; ++j, ++k) {
      const SkuId id = ids[k];
      cat.skus[id] = SkuInfo{id, cls, w};
    }
  }
  return cat;
}

}  // namespace whsim
