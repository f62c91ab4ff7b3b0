#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "skewlab/analysis.hpp"
#include "skewlab/constants.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/rng.hpp"
#include "skewlab/shipped.hpp"

using namespace skewlab;

namespace {

SkewSystem zero_system() {
  CocycleSpec s;
  s.base = liouville_rotation();
  return SkewSystem(make_cocycle(s));
}

std::vector<ShippedExample> all_examples() {
  return {example_zi(), example_pe(), small_divisor_plain(), coboundary_sin(), transient_fiber()};
}

double circle(double t) { return std::fabs(t - std::round(t)); }

TransferTable smooth_table(std::size_t cells) {
  return TransferTable::tabulate(1, cells, [](const TorusPoint& x) {
    double u = 2.0 * std::numbers::pi * x[0].to_double();
    return 0.3 * std::sin(u) + 0.2 * std::cos(2.0 * u);
  }, TorusPoint{0.0});
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("return lags are returns") {
    const BaseSystem base = liouville_rotation();
    LagSchedule s = return_lags(base, 0.01, 1 << 16, 64);
    REQUIRE(!s.lags.empty());
    CHECK(s.lags.size() <= 64);
    CHECK(s.returns_found >= s.lags.size());
    for (std::size_t i = 0; i < s.lags.size(); ++i) {
      auto n = std::get<std::int64_t>(s.lags[i]);
      CHECK(n >= 1);
      CHECK(n <= (1 << 16));
      double d = std::fabs(base.rotation_vector()[0].times(n).to_signed());
      CHECK(d < 0.01);
      CHECK(d == doctest::Approx(s.displacement[i]).epsilon(1e-12));
    }
    LagSchedule f = return_lags(sqrt2_flow(), 0.05, 1 << 14, 16);
    for (const Time& t : f.lags) {
      double v = std::get<double>(t);
      CHECK(std::max(circle(v), circle(std::sqrt(2.0) * v)) < 0.05 + 1e-9);
    }
    CHECK_THROWS_AS(return_lags(base, 0.0, 10, 4), UsageError);
    CHECK_THROWS_AS(return_lags(base, 0.1, 0, 4), UsageError);
  }

  TEST_CASE("integer fiber returns are excluded on the ex:zi window") {
    // (t, sqrt2 t) is never within 0.071 of the lattice for t = 1..5.
    for (int q = 1; q <= 5; ++q) CHECK(circle(std::sqrt(2.0) * q) >= 0.071);
  }

  TEST_CASE("ex:zi essential range is {0}") {
    auto ex = example_zi();
    RangeOptions o;
    o.budget = 1'000'000;
    auto r = estimate_essential_range(ex.system, o);
    REQUIRE(r.candidates.size() == 1);
    CHECK(r.candidates[0].value == 0.0);
    const Witness& w = r.candidates[0].witness;
    CHECK(w.displacement < o.eps);
    Witness again = make_witness(ex.system, w.tau, w.p);
    CHECK(again.increment == doctest::Approx(w.increment));
    CHECK(r.symmetric());
  }

  TEST_CASE("small-divisor cocycle without fiber has full range") {
    auto ex = small_divisor_plain();
    RangeOptions o;
    o.delta = 0.25;
    o.budget = 1'000'000;
    auto r = estimate_essential_range(ex.system, o);
    CHECK(r.candidates.size() == 41);
    CHECK(r.symmetric());
  }

  TEST_CASE("bounded coboundary has range {0}") {
    auto ex = coboundary_sin();
    RangeOptions o;
    o.eps = 0.001;  // |f| <= 2 pi eps stays inside the zero bin
    o.budget = 200'000;
    auto r = estimate_essential_range(ex.system, o);
    REQUIRE(r.candidates.size() == 1);
    CHECK(r.candidates[0].value == 0.0);
  }

  TEST_CASE("range symmetry and cohomology invariance on shipped systems") {
    for (const auto& ex : all_examples()) {
      CAPTURE(ex.name);
      RangeOptions o;
      o.budget = 200'000;
      auto r = estimate_essential_range(ex.system, o);
      CHECK(r.symmetric());
      TransferTable b = TransferTable::tabulate(ex.system.base().dim(), 64,
          [](const TorusPoint& x) { return 0.05 * std::sin(2.0 * std::numbers::pi * x[0].to_double()); },
          TorusPoint(ex.system.base().dim()));
      SkewSystem shifted(cohomologous_shift(ex.system.cocycle_ptr(), b), ex.system.rokhlin());
      auto s = estimate_essential_range(shifted, o);
      CHECK(same_range(r, s));
    }
  }

  TEST_CASE("essential range is reproducible") {
    auto ex = small_divisor_plain();
    RangeOptions o;
    o.budget = 50'000;
    auto a = estimate_essential_range(ex.system, o), b = estimate_essential_range(ex.system, o);
    REQUIRE(a.candidates.size() == b.candidates.size());
    for (std::size_t i = 0; i < a.candidates.size(); ++i)
      CHECK(a.candidates[i].witness.increment == b.candidates[i].witness.increment);
    CHECK_THROWS_AS(estimate_essential_range(ex.system, RangeOptions{.window = 0.0}), UsageError);
  }

  TEST_CASE("gap scan") {
    // kappa = 0.3 is admissible: no t in (0.3, 0.6] is a fiber return at 0.01.
    for (double t = 0.3; t <= 0.6; t += 1e-5)
      CHECK_FALSE(std::max(circle(t), circle(std::sqrt(2.0) * t)) < 0.01);
    GapOptions o;
    o.budget = 1'000'000;
    auto zi = gap_scan(example_zi().system, o);
    CHECK(zi.clean);
    CHECK_FALSE(zi.violation.has_value());
    for (double k : {0.3, 1.0, 2.0}) {
      o.kappa = k;
      o.budget = 200'000;
      auto full = gap_scan(small_divisor_plain().system, o);
      REQUIRE_FALSE(full.clean);
      double v = std::fabs(full.violation->increment);
      CHECK(v > k);
      CHECK(v <= 2.0 * k);
      CHECK(full.violation->displacement < o.eps);
      CHECK(gap_scan(zero_system(), o).clean);
    }
    o.kappa = 0.0;
    CHECK_THROWS_AS(gap_scan(zero_system(), o), UsageError);
  }

  TEST_CASE("recurrence verdicts") {
    RecurrenceOptions o;
    o.budget = 400'000;
    auto zi = classify_recurrence(example_zi().system, o);
    CHECK(zi.verdict == Recurrence::Recurrent);
    for (const auto& s : zi.scales) {
      REQUIRE(s.positive);
      REQUIRE(s.negative);
      CHECK(std::fabs(s.positive->increment) < s.eps);
      CHECK(std::get<std::int64_t>(s.positive->tau) > 0);
      CHECK(std::get<std::int64_t>(s.negative->tau) < 0);
    }
    auto tr = classify_recurrence(transient_fiber().system, o);
    CHECK(tr.verdict == Recurrence::Transient);
    REQUIRE(!tr.profile.empty());
    for (const auto& p : tr.profile) CHECK(p.escapes);
    CHECK(classify_recurrence(zero_system(), o).verdict == Recurrence::Recurrent);
    // Right translation of the starts does not change the verdict.
    o.a0 = 3.0;
    CHECK(classify_recurrence(example_zi().system, o).verdict == Recurrence::Recurrent);
    CHECK(classify_recurrence(transient_fiber().system, o).verdict == Recurrence::Transient);
    o.budget = 10;
    CHECK_THROWS_AS(classify_recurrence(zero_system(), o), UsageError);
  }

  TEST_CASE("Gottschalk-Hedlund recovers sin(2 pi x)") {
    auto ex = coboundary_sin();
    GHOptions o;
    auto r = gottschalk_hedlund(ex.system, o);
    REQUIRE(r.coboundary);
    double err = 0.0;
    for (std::size_t i = 0; i < r.table.values().size(); ++i) {
      double x = r.table.node(i)[0].to_double();
      err = std::max(err, std::fabs(r.table.values()[i] - std::sin(2.0 * std::numbers::pi * x)));
    }
    CHECK(err < 1e-3);
    CHECK(r.residual < 1e-3);
  }

  TEST_CASE("Gottschalk-Hedlund rejects the J=5 small-divisor cocycle") {
    auto spec = small_divisor_builder(liouville_rotation(), 5, 0.5).spec;
    SkewSystem sys(make_cocycle(spec));
    auto r = gottschalk_hedlund(sys, GHOptions{});
    REQUIRE_FALSE(r.coboundary);
    CHECK(std::fabs(r.witness.value) > 100.0);
    CHECK(r.witness.displacement < 1e-3);
    CHECK(std::fabs(sys.cocycle().evaluate(r.witness.tau, r.witness.x)) == doctest::Approx(std::fabs(r.witness.value)));
  }

  TEST_CASE("Gottschalk-Hedlund round trip and trivial cases") {
    CocycleSpec zero;
    zero.base = golden_rotation_system();
    auto b = smooth_table(64);
    SkewSystem sys(cohomologous_shift(make_cocycle(zero), b));
    GHOptions o;
    o.steps = 200'000;
    o.h = 1.0 / 256;
    auto r = gottschalk_hedlund(sys, o);
    REQUIRE(r.coboundary);
    double err = 0.0;
    for (std::size_t i = 0; i < r.table.values().size(); ++i)
      err = std::max(err, std::fabs(r.table.values()[i] - b(r.table.node(i))));
    CHECK(err < 10.0 * o.h);
    auto z = gottschalk_hedlund(SkewSystem(make_cocycle(zero)), o);
    REQUIRE(z.coboundary);
    for (double v : z.table.values()) CHECK(v == 0.0);
    o.steps = 100;
    CHECK_THROWS_AS(gottschalk_hedlund(sys, o), UsageError);
  }

  TEST_CASE("relative triviality profiles") {
    auto ex = example_zi();
    TrivialityOptions o;
    o.eps = {0.1, 0.01};
    o.budget = 400'000;
    auto same = relative_triviality(ex.system, lift_generator(ex.system), o);
    auto twice = relative_triviality(ex.system, lift_generator(ex.system, 2.0), o);
    for (std::size_t e = 0; e < o.eps.size(); ++e) {
      REQUIRE_FALSE(same.rows[e].no_data);
      CHECK(same.rows[e].max_f2 <= o.eps[e] + 1e-9);
      CHECK(twice.rows[e].max_f2 <= 2.0 * o.eps[e] + 1e-9);
    }
    // An independent small-divisor generator in the y coordinate.
    PhaseGenerator y;
    for (TrigTerm t : small_divisor_builder(liouville_rotation(), 2, 0.5).spec.terms) {
      t.freq = {0, t.freq[0], 0};
      y.terms.push_back(t);
    }
    auto other = relative_triviality(ex.system, y, o);
    REQUIRE_FALSE(other.rows[1].no_data);
    CHECK(other.rows[0].max_f2 > 0.1);
    CHECK(other.rows[1].max_f2 > 0.1);
    const auto& row = other.rows[1];
    CHECK(phase_birkhoff_sum(ex.system, y, row.p, row.tau) == doctest::Approx(std::fabs(row.max_f2)).epsilon(1e-6).scale(1.0));
    CHECK_THROWS_AS(relative_triviality(transient_fiber().system, y, o), UsageError);
  }

  TEST_CASE("RIM projection") {
    auto zi = example_zi();
    RimProjection pz(zi.system, 16);
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
      TorusPoint x{static_cast<double>(rng.uniform())};
      std::int64_t n = rng.integer(-100000, 100000);
      CHECK(pz.evaluate(Time{n}, x) == zi.system.cocycle().evaluate(Time{n}, x));
    }
    // cos(2 pi y) summed over a product rotation averages to 0 in y.
    CocycleSpec prod;
    prod.base = BaseSystem::rotation({alpha_liouville().turn, golden_rotation().turn}, "product");
    prod.terms = {{{0, 1}, 1.0, 0.0}};
    RimProjection pp(make_cocycle(prod), 1, 1024);
    for (int i = 0; i < 50; ++i) {
      TorusPoint x{static_cast<double>(rng.uniform())};
      CHECK(std::fabs(pp.evaluate(Time{std::int64_t{rng.integer(-1000, 1000)}}, x)) < 1e-6);
    }
    // ex:pe: grid average of the R increment, two routes.
    auto pe = example_pe();
    RimProjection pr(pe.system, 32);
    for (int i = 0; i < 5; ++i) {
      SkewPoint p;
      p.x = TorusPoint{static_cast<double>(rng.uniform())};
      std::int64_t n = rng.integer(-1000, 1000);
      double direct = 0.0;
      for (std::size_t a = 0; a < 32; ++a)
        for (std::size_t b = 0; b < 32; ++b) {
          p.m = TorusPoint{a / 32.0, b / 32.0};
          p.a = 0.0;
          direct += skew_act(pe.system, Time{n}, p).a;
        }
      direct /= 1024.0;
      CHECK(std::fabs(pr.evaluate(Time{n}, p.x) - direct) < 1e-6);
    }
    CHECK(check_identity(pr, 200, 9).max_residual < 1e-6);
    CHECK_THROWS_AS(RimProjection(small_divisor_plain().system, 8), UnsupportedError);
    CHECK_THROWS_AS(RimProjection(make_cocycle(prod), 2, 8), UnsupportedError);
  }

  TEST_CASE("report layout") {
    auto ex = example_zi();
    RangeOptions o;
    o.budget = 20'000;
    std::ostringstream os;
    write_report(os, estimate_essential_range(ex.system, o));
    std::string s = os.str();
    CHECK(s.rfind("report=essential-range\n", 0) == 0);
    CHECK(s.find("\n\nvalue,tau,x,m,a,increment,displacement\n") != std::string::npos);
    std::ostringstream gh;
    write_report(gh, gottschalk_hedlund(coboundary_sin().system, GHOptions{.steps = 20'000, .h = 1.0 / 64}));
    CHECK(gh.str().find("result=Coboundary\n") != std::string::npos);
    CHECK(format_double(0.1) == "0.1");
  }
}
