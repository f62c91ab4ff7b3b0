#include <cmath>
#include <sstream>

#include "doctest.h"
#include "skewlab/constants.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/rng.hpp"
#include "skewlab/shipped.hpp"

using namespace skewlab;

namespace {

SkewPoint random_point(const SkewSystem& sys, Rng& rng) {
  SkewPoint p;
  p.x = TorusPoint(sys.base().dim());
  for (std::size_t i = 0; i < p.x.dim(); ++i) p.x[i] = Turn(rng.next());
  if (sys.has_fiber()) {
    p.m = TorusPoint(sys.fiber_flow().dim());
    for (std::size_t i = 0; i < p.m->dim(); ++i) (*p.m)[i] = Turn(rng.next());
  }
  p.a = rng.uniform(-5.0, 5.0);
  return p;
}

double gap(const SkewPoint& p, const SkewPoint& q) {
  return std::max(phase_distance(p, q), std::fabs(p.a - q.a));
}

Time random_time(const SkewSystem& sys, Rng& rng) {
  if (sys.discrete()) return Time{rng.integer(-100000, 100000)};
  return Time{rng.uniform(-100.0, 100.0)};
}

Time sum(const Time& a, const Time& b) {
  if (is_discrete(a)) return Time{std::get<std::int64_t>(a) + std::get<std::int64_t>(b)};
  return Time{std::get<double>(a) + std::get<double>(b)};
}

}  // namespace

TEST_SUITE("skew") {

TEST_CASE("group law and commutation on shipped systems") {
  Rng rng(21);
  for (const auto& ex : {example_zi(), example_pe(), small_divisor_plain(), transient_fiber()}) {
    double worst_law = 0.0, worst_comm = 0.0;
    for (int s = 0; s < 500; ++s) {
      SkewPoint p = random_point(ex.system, rng);
      Time t = random_time(ex.system, rng), u = random_time(ex.system, rng);
      SkewPoint lhs = skew_act(ex.system, t, skew_act(ex.system, u, p));
      SkewPoint rhs = skew_act(ex.system, sum(t, u), p);
      worst_law = std::max(worst_law, gap(lhs, rhs));
      double b = rng.uniform(-10.0, 10.0);
      SkewPoint c1 = translate(skew_act(ex.system, t, p), b);
      SkewPoint c2 = skew_act(ex.system, t, translate(p, b));
      worst_comm = std::max(worst_comm, gap(c1, c2));
    }
    INFO(ex.name);
    CHECK(worst_law < 1e-9);
    CHECK(worst_comm < 1e-12);
  }
}

TEST_CASE("incremental orbit agrees with the closed form") {
  ShippedExample ex = example_pe();
  std::vector<Time> schedule = {std::int64_t{100000}, std::int64_t{-100000},
                                std::int64_t{0}, std::int64_t{777}};
  auto pts = orbit(ex.system, ex.start, schedule);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    SkewPoint direct = skew_act(ex.system, schedule[i], ex.start);
    CHECK(gap(pts[i], direct) < 1e-6);
  }
  CHECK(pts[2].a == ex.start.a);
}

TEST_CASE("backward walk uses the inverse branch") {
  ShippedExample ex = small_divisor_plain();
  OrbitWalker w(ex.system, ex.start);
  for (int i = 0; i < 5000; ++i) w.backward();
  // f(-n, x) = -f(n, T^{-n} x)
  TorusPoint back = ex.system.base().act(std::int64_t{-5000}, ex.start.x);
  double expect = -ex.system.cocycle().evaluate(Time{std::int64_t{5000}}, back);
  CHECK(std::fabs(w.cocycle_sum() - expect) < 1e-9);
  for (int i = 0; i < 5000; ++i) w.forward();
  CHECK(std::fabs(w.cocycle_sum()) < 1e-9);
  CHECK(w.x() == ex.start.x);
}

TEST_CASE("Rokhlin fiber moves along the flow by f") {
  ShippedExample ex = example_zi();
  SkewPoint p = ex.start;
  p.m = TorusPoint{0.2, 0.4};
  SkewPoint q = skew_act(ex.system, Time{std::int64_t{12345}}, p);
  double F = ex.system.cocycle().evaluate(Time{std::int64_t{12345}}, p.x);
  CHECK(q.a == doctest::Approx(F).epsilon(1e-15));
  auto m = q.m->to_doubles();
  double y = 0.2 + F, z = 0.4 + std::sqrt(2.0) * F;
  CHECK(circle_distance(Turn::from_double(m[0]), Turn::from_double(y)) < 1e-12);
  CHECK(circle_distance(Turn::from_double(m[1]), Turn::from_double(z)) < 1e-12);
}

TEST_CASE("perturbed fiber value stays within half the base increment") {
  ShippedExample ex = example_pe();
  Rng rng(5);
  for (int s = 0; s < 1000; ++s) {
    SkewPoint p = random_point(ex.system, rng);
    p.a = 0.0;
    Time t{rng.integer(-1000000, 1000000)};
    double F = ex.system.cocycle().evaluate(t, p.x);
    double a = skew_act(ex.system, t, p).a;
    CHECK(std::fabs(a - F) <= 0.25 * std::fabs(F) + 1e-12);
  }
}

TEST_CASE("certificate and shape violations") {
  ExampleParameters params;
  CocycleSpec g = example_perturbation(params);
  for (auto& t : g.terms) t.amplitude *= 20.0;
  auto f = make_cocycle(small_divisor_builder(liouville_rotation(), 2, 0.01).spec);
  CHECK_THROWS_AS(SkewSystem(f, RokhlinFiber{sqrt2_flow(), g}), UsageError);
  CocycleSpec drifted = example_perturbation(params);
  drifted.drift = 0.1;
  CHECK_THROWS_AS(SkewSystem(f, RokhlinFiber{sqrt2_flow(), drifted}), UsageError);
  SkewSystem plain(f);
  SkewPoint bad;
  bad.x = TorusPoint{0.1};
  bad.m = TorusPoint{0.1, 0.1};
  CHECK_THROWS_AS(skew_act(plain, Time{std::int64_t{1}}, bad), UsageError);
  bad.m.reset();
  CHECK_THROWS_AS(skew_act(plain, Time{0.5}, bad), UsageError);
}

TEST_CASE("orbit csv columns") {
  ShippedExample ex = example_zi();
  std::vector<Time> schedule = {std::int64_t{0}, std::int64_t{1}};
  auto pts = orbit(ex.system, ex.start, schedule);
  std::ostringstream os;
  write_orbit_csv(os, schedule, pts);
  std::string first = os.str().substr(0, os.str().find('\n'));
  CHECK(first == "time,x1,m1,m2,a");
}

}
