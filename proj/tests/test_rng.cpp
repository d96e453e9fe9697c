#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "whsim/rng.hpp"

using namespace whsim;

TEST_CASE("same seed gives the same sequence") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("derived seeds differ by stream name and replication") {
  std::set<std::uint64_t> seen;
  for (const char* name : {"arrivals", "classes", "collars", "order_sizes", "order_skus"}) {
    for (int rep = 0; rep < 20; ++rep) seen.insert(derive_seed(7, name, rep));
  }
  CHECK(seen.size() == 100);
  CHECK(derive_seed(7, "arrivals", 3) == derive_seed(7, "arrivals", 3));
  CHECK(derive_seed(7, "arrivals", 3) != derive_seed(8, "arrivals", 3));
}

TEST_CASE("uniform stays in [0,1) with the right mean") {
  Rng r(1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12/n) ~ 6.5e-4
  CHECK(std::abs(sum / n - 0.5) < 0.004);
}

TEST_CASE("below is unbiased over a small range") {
  Rng r(9);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[r.below(7)];
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
  CHECK(chi2 < 16.81);  // chi2(6) at 0.01
}

TEST_CASE("normal moments") {
  Rng r(3);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal(5.0, 2.0);
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::abs(mean - 5.0) < 0.03);
  CHECK(std::abs(var - 4.0) < 0.08);
}

TEST_CASE("lognormal with zero sigma is deterministic") {
  Rng r(5);
  CHECK(r.lognormal(std::log(1500.0), 0.0) == doctest::Approx(1500.0).epsilon(1e-12));
}

TEST_CASE("lognormal mean matches exp(mu + sigma^2/2)") {
  Rng r(11);
  const double mu = 6.0, sigma = 0.6;
  const int n = 400000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += r.lognormal(mu, sigma);
  const double expect = std::exp(mu + sigma * sigma / 2.0);
  CHECK(std::abs(s / n / expect - 1.0) < 0.01);
}

TEST_CASE("replication streams are uncorrelated at lag 0") {
  Rng a(derive_seed(1, "arrivals", 0));
  Rng b(derive_seed(1, "arrivals", 1));
  const int n = 100000;
  double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform(), y = b.uniform();
    sa += x;
    sb += y;
    sab += x * y;
    saa += x * x;
    sbb += y * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double r = cov / std::sqrt((saa / n - (sa / n) * (sa / n)) * (sbb / n - (sb / n) * (sb / n)));
  CHECK(std::abs(r) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("discrete follows the weights") {
  Rng r(2);
  const std::vector<double> w{0.5, 0.0, 0.25, 0.25};
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 100000; ++i) ++counts[r.discrete(w)];
  CHECK(counts[1] == 0);
  CHECK(std::abs(counts[0] / 1e5 - 0.5) < 0.01);
  CHECK(std::abs(counts[2] / 1e5 - 0.25) < 0.01);
}
