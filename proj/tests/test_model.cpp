#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "whsim/errors.hpp"
#include "whsim/model.hpp"

using namespace whsim;

TEST_CASE("pallet height is 200 mm per collar") {
  CHECK(pallet_height_mm(1) == 200);
  CHECK(pallet_height_mm(6) == 1200);
  CHECK_THROWS_AS(pallet_height_mm(0), DomainError);
  CHECK_THROWS_AS(pallet_height_mm(7), DomainError);
  for (int c = 1; c < 6; ++c) CHECK(pallet_height_mm(c) < pallet_height_mm(c + 1));
}

TEST_CASE("pallet formats have fixed footprints") {
  const auto full = PalletFormat::of(PalletKind::EuroFull);
  const auto half = PalletFormat::of(PalletKind::EuroHalf);
  CHECK(full.length_mm == 1200);
  CHECK(full.width_mm == 800);
  CHECK(half.length_mm == 800);
  CHECK(half.width_mm == 600);
}

TEST_CASE("draw_sku_class boundaries") {
  const ClassSplit s{0.80, 0.15, 0.05};
  CHECK(draw_sku_class(0.0, s) == SkuClass::A);
  CHECK(draw_sku_class(0.90, s) == SkuClass::B);
  CHECK(draw_sku_class(0.99, s) == SkuClass::C);
  CHECK(draw_sku_class(0.80, s) == SkuClass::B);
  CHECK_THROWS_AS(draw_sku_class(1.0, s), DomainError);
  CHECK_THROWS_AS(draw_sku_class(-0.1, s), DomainError);
}

TEST_CASE("draw_sku_class frequencies over a million draws") {
  const ClassSplit s{0.80, 0.15, 0.05};
  Rng r(123);
  std::array<int, 3> n{};
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) ++n[index_of(draw_sku_class(r.uniform(), s))];
  CHECK(std::abs(n[0] / double(draws) - 0.80) < 0.005);
  CHECK(std::abs(n[1] / double(draws) - 0.15) < 0.005);
  CHECK(std::abs(n[2] / double(draws) - 0.05) < 0.005);
}

TEST_CASE("class split validation") {
  CHECK_NOTHROW((ClassSplit{0.8, 0.15, 0.05}.validate("x")));
  CHECK_THROWS_AS((ClassSplit{0.8, 0.15, 0.06}.validate("x")), ConfigError);
  CHECK_THROWS_AS((ClassSplit{1.1, -0.1, 0.0}.validate("x")), ConfigError);
}

TEST_CASE("catalog of 100 SKUs follows the Pareto split") {
  Rng r(1);
  const auto cat = build_catalog(100, {0.2, 0.3, 0.5}, {0.8, 0.15, 0.05}, r);
  CHECK(cat.skus.size() == 100);
  CHECK(cat.skus_of(SkuClass::A).size() == 20);
  CHECK(cat.skus_of(SkuClass::B).size() == 30);
  CHECK(cat.skus_of(SkuClass::C).size() == 50);
  CHECK(cat.class_weight(SkuClass::A) == doctest::Approx(0.80).epsilon(1e-12));
  double total = 0.0;
  for (const auto& s : cat.skus) total += s.demand_weight;
  CHECK(std::abs(total - 1.0) < 1e-9);
  // Equal weights inside a class.
  for (auto cls : kAllClasses) {
    const auto ids = cat.skus_of(cls);
    for (auto id : ids) CHECK(cat.at(id).demand_weight == cat.at(ids.front()).demand_weight);
  }
}

TEST_CASE("symmetric catalog has equal weights") {
  Rng r(2);
  const double t = 1.0 / 3.0;
  const auto cat = build_catalog(3, {t, t, t}, {t, t, t}, r);
  for (const auto& s : cat.skus) CHECK(s.demand_weight == doctest::Approx(t));
}

TEST_CASE("catalog is deterministic for a seed and sums to one") {
  for (int n : {3, 7, 50, 120, 333}) {
    Rng a(99), b(99);
    const auto c1 = build_catalog(n, {0.2, 0.3, 0.5}, {0.8, 0.15, 0.05}, a);
    const auto c2 = build_catalog(n, {0.2, 0.3, 0.5}, {0.8, 0.15, 0.05}, b);
    double total = 0.0;
    for (std::size_t i = 0; i < c1.skus.size(); ++i) {
      CHECK(c1.skus[i].sku_class == c2.skus[i].sku_class);
      total += c1.skus[i].demand_weight;
    }
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("catalog rejects a class with demand but no SKUs") {
  Rng r(3);
  CHECK_THROWS_AS((build_catalog(10, {0.0, 0.5, 0.5}, {0.8, 0.15, 0.05}, r)), ConfigError);
  CHECK_THROWS_AS((build_catalog(2, {0.2, 0.3, 0.5}, {0.8, 0.15, 0.05}, r)), ConfigError);
}

TEST_CASE("order counts its pallets") {
  Order o;
  o.lines = {{1, 2}, {4, 3}};
  CHECK(o.total_pallets() == 5);
}
