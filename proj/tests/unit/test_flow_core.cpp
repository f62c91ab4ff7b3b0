#include <cmath>

#include "doctest.h"
#include "skewlab/base_system.hpp"
#include "skewlab/constants.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/rng.hpp"

using namespace skewlab;

TEST_SUITE("flow_core") {

TEST_CASE("liouville expansion and convergents") {
  const auto& c = alpha_liouville();
  // Exact expansion of 0x19930d8e5de01608 / 2^64, from rational arithmetic.
  const std::int64_t q[] = {1, 10, 1001, 10010010, 503673674171, 1511031032523,
                            5036766771740, 21658098119483};
  const std::int64_t p[] = {0, 1, 100, 1000001, 50317050417, 150952151252,
                            503173504173, 2163646167944};
  REQUIRE(c.convergents.size() >= 8);
  for (int j = 0; j < 8; ++j) {
    CHECK(c.convergents[j].q == q[j]);
    CHECK(c.convergents[j].p == p[j]);
  }
  CHECK(c.turn.raw() == 0x19930d8e5de01608ULL);
  // |alpha - p/q| < 1/q^2 at q = 10010010
  CHECK(std::fabs(static_cast<double>(c.value) - 1000001.0 / 10010010.0) < 1e-14);
}

TEST_CASE("sqrt2 and golden convergents") {
  const auto& b = beta_sqrt2();
  REQUIRE(b.convergents.size() > 10);
  CHECK(b.convergents[0].p == 1);
  CHECK(b.convergents[1].p == 3);
  CHECK(b.convergents[1].q == 2);
  CHECK(b.convergents[6].p == 239);
  CHECK(b.convergents[6].q == 169);
  for (const auto& c : b.convergents)
    CHECK(std::llabs(c.p * c.p - 2 * c.q * c.q) == 1);
  const auto& g = golden_rotation();
  std::int64_t f0 = 1, f1 = 1;
  for (std::size_t j = 1; j < 20; ++j) {
    CHECK(g.convergents[j].q == f1);
    std::int64_t t = f0 + f1;
    f0 = f1;
    f1 = t;
  }
}

TEST_CASE("turn conversions") {
  CHECK(Turn::from_double(0.25).raw() == (std::uint64_t{1} << 62));
  CHECK(Turn::from_double(-0.25).raw() == (std::uint64_t{3} << 62));
  CHECK(Turn::from_double(3.5).to_double() == 0.5);
  CHECK(Turn(~std::uint64_t{0}).to_double() < 1.0);
  CHECK(Turn::from_double(-1e-30).to_double() < 1.0);
  CHECK(Turn::from_double(0.75).to_signed() == -0.25);
  CHECK(circle_distance(Turn::from_double(0.95), Turn::from_double(0.05)) ==
        doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(Turn::from_double(NAN), UsageError);
}

TEST_CASE("torus point coordinates in [0,1)") {
  TorusPoint p{1.25, -0.25, 7.0};
  auto v = p.to_doubles();
  CHECK(v[0] == 0.25);
  CHECK(v[1] == 0.75);
  CHECK(v[2] == 0.0);
  CHECK_THROWS_AS(TorusPoint(0), UsageError);
  CHECK_THROWS_AS(TorusPoint(5), UsageError);
}

TEST_CASE("metric") {
  Rng rng(7);
  for (int s = 0; s < 1000; ++s) {
    TorusPoint a{rng.uniform(), rng.uniform()};
    TorusPoint b{rng.uniform(), rng.uniform()};
    TorusPoint c{rng.uniform(), rng.uniform()};
    double d = distance(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= 0.5);
    CHECK(d == distance(b, a));
    CHECK(distance(a, a) == 0.0);
    CHECK(distance(a, c) <= d + distance(b, c) + 1e-15);
  }
  CHECK(distance(TorusPoint{0.1, 0.9}, TorusPoint{0.2, 0.05}) ==
        doctest::Approx(0.15).epsilon(1e-12));
  CHECK_THROWS_AS(distance(TorusPoint{0.1}, TorusPoint{0.1, 0.2}), UsageError);
}

TEST_CASE("rotation group law is exact") {
  BaseSystem r = liouville_rotation();
  Rng rng(11);
  for (int s = 0; s < 1000; ++s) {
    TorusPoint x{rng.uniform()};
    std::int64_t n = rng.integer(-1'000'000'000'000, 1'000'000'000'000);
    std::int64_t m = rng.integer(-1'000'000'000'000, 1'000'000'000'000);
    CHECK(r.act(n, r.act(m, x)) == r.act(n + m, x));
    CHECK(distance(r.act(n, r.act(m, x)), r.act(n + m, x)) < 1e-12);
  }
  CHECK(r.act(std::int64_t{0}, TorusPoint{0.3}) == TorusPoint{0.3});
}

TEST_CASE("flow group law") {
  BaseSystem f = sqrt2_flow();
  Rng rng(12);
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) {
    TorusPoint x{rng.uniform(), rng.uniform()};
    double t = rng.uniform(-1e3, 1e3), u = rng.uniform(-1e3, 1e3);
    worst = std::max(worst, distance(f.act(t, f.act(u, x)), f.act(t + u, x)));
  }
  CHECK(worst < 1e-12);
  // phi^t(0) = (t, sqrt2 t) mod 1
  auto y = f.act(0.5, TorusPoint{0.0, 0.0}).to_doubles();
  CHECK(y[0] == 0.5);
  CHECK(y[1] == doctest::Approx(0.70710678118654752 - 0.0).epsilon(1e-15));
}

TEST_CASE("time type mismatch is a usage error") {
  CHECK_THROWS_AS(liouville_rotation().act(0.5, TorusPoint{0.1}), UsageError);
  CHECK_THROWS_AS(sqrt2_flow().act(std::int64_t{3}, TorusPoint{0.1, 0.2}),
                  UsageError);
  CHECK_THROWS_AS(liouville_rotation().act(std::int64_t{1}, TorusPoint{0.1, 0.2}),
                  UsageError);
  CHECK_THROWS_AS(shipped_constant("pi"), UsageError);
}

TEST_CASE("minimality probe") {
  Rng rng(5);
  auto probe = [&](const BaseSystem& b, std::int64_t n) {
    std::vector<Turn> pts;
    pts.reserve(static_cast<std::size_t>(n));
    TorusPoint x{rng.uniform()};
    for (std::int64_t i = 0; i < n; ++i) {
      pts.push_back(x[0]);
      x[0] += b.rotation_vector()[0];
    }
    return covering_radius_1d(std::move(pts));
  };
  CHECK(probe(golden_rotation_system(), 1'000'000) < 1e-4);
  // The Liouville orbit sits near 1001 clusters until ||1001 alpha|| ~ 1e-7
  // has been accumulated about 10^7 times.
  CHECK(probe(liouville_rotation(), 1'000'000) > 1e-4);
  CHECK(probe(liouville_rotation(), 12'000'000) < 1e-4);
}

TEST_CASE("rng streams are reproducible") {
  Rng a(99), b(99);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  Rng c = Rng(1).split(3), d = Rng(1).split(3), e = Rng(1).split(4);
  CHECK(c.next() == d.next());
  CHECK(c.next() != e.next());
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    auto k = r.integer(-3, 3);
    CHECK(k >= -3);
    CHECK(k <= 3);
  }
}

}
