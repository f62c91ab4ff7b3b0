// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "skewlab/analysis.hpp"
#include "skewlab/cli.hpp"
#include "skewlab/constants.hpp"
#include "skewlab/hyperspace.hpp"
#include "skewlab/rng.hpp"
#include "skewlab/shipped.hpp"

using namespace skewlab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<ShippedExample> shipped() {
  return {example_zi(), example_pe(), small_divisor_plain(), coboundary_sin(), transient_fiber()};
}

// {(x', phi^t(m0), a0 + t + g(t, m0))}, the closure of the ex:zi orbit.
GridSet analytic_set(const ShippedExample& ex, const GridGeometry& g) {
  GridBuilder b(g);
  const auto& v = ex.system.fiber_flow().direction();
  const TrigCocycle* pert = ex.system.perturbation();
  const TorusPoint& m0 = *ex.start.m;
  Turn c[kMaxTorusDim];
  const double h = g.h();
  for (std::uint32_t xi = 0; xi < g.cells_per_unit; ++xi) {
    c[0] = Turn::from_double((xi + 0.5) * h);
    for (double t = -2.0 * g.radius; t <= 2.0 * g.radius; t += h / 8) {
      for (std::size_t j = 0; j < v.size(); ++j)
        c[1 + j] = m0[j] + Turn::from_long_double(static_cast<long double>(t) * v[j]);
      b.add(c, ex.start.a + t + (pert ? pert->evaluate(Time{t}, m0) : 0.0));
    }
  }
  return b.build();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// AC1: identity residual over 10^4 samples for every shipped cocycle.
Outcome ac1() {
  double worst = 0.0;
  for (const auto& ex : shipped()) {
    worst = std::max(worst, check_identity(ex.system.cocycle(), 10'000, 1).max_residual);
    if (ex.system.perturbation())
      worst = std::max(worst, check_identity(*ex.system.perturbation(), 10'000, 2).max_residual);
  }
  return {worst < 1e-9, "max residual " + fmt("%.3g", worst) + " (< 1e-9)"};
}

// AC2: skew action commutes with right translation.
Outcome ac2() {
  double worst = 0.0;
  for (const auto& ex : shipped()) {
    Rng rng(17);
    for (int i = 0; i < 10'000; ++i) {
      SkewPoint p = random_phase_point(ex.system, rng.next(), rng.uniform(-10.0, 10.0));
      double b = rng.uniform(-10.0, 10.0);
      Time t = ex.system.discrete() ? Time{rng.integer(-(1 << 20), 1 << 20)}
                                    : Time{rng.uniform(-1000.0, 1000.0)};
      SkewPoint u = skew_act(ex.system, t, translate(p, b));
      SkewPoint w = translate(skew_act(ex.system, t, p), b);
      worst = std::max({worst, phase_distance(u, w), std::fabs(u.a - w.a)});
    }
  }
  return {worst <= 1e-12, "max deviation " + fmt("%.3g", worst) + " (<= 1e-12)"};
}

// AC3: GH round trip and the J=5 non-coboundary.
Outcome ac3() {
  GHOptions o;
  o.steps = 1'000'000;
  o.h = 1.0 / 1024;
  auto r = gottschalk_hedlund(coboundary_sin().system, o);
  double err = 1e9;
  if (r.coboundary) {
    err = 0.0;
    for (std::size_t i = 0; i < r.table.values().size(); ++i) {
      double x = r.table.node(i)[0].to_double();
      err = std::max(err, std::fabs(r.table.values()[i] - std::sin(2.0 * M_PI * x)));
    }
  }
  SkewSystem j5(make_cocycle(small_divisor_builder(liouville_rotation(), 5, 0.5).spec));
  auto n = gottschalk_hedlund(j5, o);
  bool ok = r.coboundary && err < 1e-3 && !n.coboundary &&
            std::fabs(n.witness.value) > 100.0 && n.witness.displacement < 1e-3;
  return {ok, "sup error " + fmt("%.3g", err) + ", J=5 " +
                  (n.coboundary ? "Coboundary" : "NotCoboundary") + " |f|=" +
                  fmt("%.4g", std::fabs(n.witness.value)) + " at displacement " +
                  fmt("%.3g", n.witness.displacement)};
}

// AC4: E = {0} for ex:zi, with the integer exclusions checked directly.
Outcome ac4() {
  bool excluded = true;
  for (int q = 1; q <= 5; ++q) {
    double s = std::sqrt(2.0) * q;
    excluded = excluded && std::fabs(s - std::round(s)) > 0.01;
  }
  RangeOptions o;
  o.window = 5.0;
  o.delta = 0.05;
  o.eps = 0.01;
  o.budget = 10'000'000;
  auto r = estimate_essential_range(example_zi().system, o);
  std::string vals;
  for (const auto& c : r.candidates) vals += (vals.empty() ? "" : ",") + format_double(c.value);
  bool ok = excluded && r.candidates.size() == 1 && r.candidates[0].value == 0.0;
  return {ok, "candidates {" + vals + "}, budget used " + std::to_string(r.budget_used)};
}

struct ZiClosure {
  GridGeometry geom;
  ClosureOptions opt;
  std::optional<GridSet> closure;
};

ZiClosure& zi_closure() {
  static ZiClosure z = [] {
    ZiClosure c;
    c.geom = make_geometry(8.0, 1.0 / 128, 3);
    c.opt.steps = 10'000'000;
    auto ex = example_zi();
    c.closure = orbit_closure(ex.system, ex.start, c.geom, c.opt);
    return c;
  }();
  return z;
}

// AC5: ex:zi closure against the rasterized analytic set.
Outcome ac5() {
  auto& z = zi_closure();
  double d = truncated_fell_distance(*z.closure, analytic_set(example_zi(), z.geom));
  return {d < 2.0 * z.geom.h(), "distance " + fmt("%.3g", d / z.geom.h()) + "h (< 2h)"};
}

// AC6: ex:pe partition, Fell continuity and Mackey density at desk scale.
Outcome ac6() {
  auto ex = example_pe();
  const double h = 1.0 / 64;
  ClosureOptions co;
  co.steps = 2'500'000;
  PartitionOptions opt;
  opt.geom = make_geometry(8.0, h, 3);
  opt.prolong.closure = co;
  opt.pairs = 50;
  auto part = verify_partition(ex.system, ex.start, opt);

  ProlongationOptions po;
  po.closure = co;
  GridSet d = prolongation(ex.system, ex.start, opt.geom, po);
  double fell = 0.0;
  for (int k : {8, 12, 16}) {
    double e = std::ldexp(1.0, -k);
    SkewPoint q = ex.start;
    q.x[0] += Turn::from_double(e);
    (*q.m)[0] += Turn::from_double(-e);
    (*q.m)[1] += Turn::from_double(e);
    q.a += e;
    fell = truncated_fell_distance(prolongation(ex.system, q, opt.geom, po), d);
  }

  GridSet d0 = prolongation(ex.system, ex.start, make_geometry(16.0, h, 3), po);
  auto pts = sample_generic_points(ex.system, ex.start, 50, 2.0, 200'000, 7);
  std::vector<GridSet> sets;
  for (const auto& p : pts) sets.push_back(prolongation(ex.system, p, opt.geom, po));
  auto dens = mackey_density(d0, 8.0, 8.0, sets, 5.0 * h);

  bool ok = part.pairs == 50 && part.violations == 0 && fell < 5.0 * h &&
            dens.covered == dens.samples && dens.worst <= 5.0 * h;
  return {ok, std::to_string(part.violations) + " violations over " + std::to_string(part.pairs) +
                  " pairs; Fell " + fmt("%.3g", fell / h) + "h; Mackey worst " +
                  fmt("%.3g", dens.worst / h) + "h over " + std::to_string(dens.samples) +
                  " samples"};
}

// AC7: transience, surjectivity of 1 + g, prolongation against the orbit.
Outcome ac7() {
  auto tf = transient_fiber();
  auto v = classify_recurrence(tf.system, RecurrenceOptions{});
  const double h = 1.0 / 128;
  auto s = surjectivity_check(tf.system.cocycle(), 64, 8.0, h, 1);
  auto& z = zi_closure();
  auto zi = example_zi();
  ProlongationOptions po;
  po.closure = z.opt;
  GridSet p = prolongation(zi.system, zi.start, z.geom, po);
  double d = truncated_fell_distance(p, *z.closure);
  bool ok = v.verdict == Recurrence::Transient && s.covered && s.max_gap < 2.0 * h &&
            d < 2.0 * z.geom.h();
  return {ok, std::string(to_string(v.verdict)) + "; max gap " + fmt("%.3g", s.max_gap / h) +
                  "h (< 2h); prolongation vs orbit " + fmt("%.3g", d / z.geom.h()) + "h (< 2h)"};
}

// AC8: symmetry and invariance under a cohomologous shift.
Outcome ac8() {
  bool ok = true;
  std::string bad;
  for (const auto& ex : shipped()) {
    RangeOptions o;
    o.budget = 1'000'000;
    auto r = estimate_essential_range(ex.system, o);
    TransferTable b = TransferTable::tabulate(
        ex.system.base().dim(), 256,
        [](const TorusPoint& x) {
          double u = 2.0 * M_PI * x[0].to_double();
          return 0.05 * std::sin(u) + 0.02 * std::cos(2.0 * u);
        },
        TorusPoint(ex.system.base().dim()));
    SkewSystem shifted(cohomologous_shift(ex.system.cocycle_ptr(), b), ex.system.rokhlin());
    auto s = estimate_essential_range(shifted, o);
    bool this_ok = r.symmetric() && s.symmetric() && same_range(r, s);
    if (!this_ok) bad += " " + ex.name;
    ok = ok && this_ok;
  }
  return {ok, ok ? "all 5 shipped systems" : "failed:" + bad};
}

// AC9: two runs of every shipped config command give identical digests.
Outcome ac9() {
  fs::path dir = fs::temp_directory_path() / "skewlab_acceptance_repro";
  fs::remove_all(dir);
  auto cfgs = emit_example_configs(dir);
  std::size_t runs = 0, mismatches = 0;
  std::ostringstream sink;
  for (const auto& cfg : cfgs) {
    ConfigBlock root = parse_config(read_text_file(cfg));
    std::vector<std::string> commands;
    if (const ConfigBlock* a = root.block("analysis"))
      for (const auto& b : a->blocks) commands.push_back(b.name);
    for (const auto& cmd : commands) {
      std::vector<RunManifest> m;
      for (const char* side : {"a", "b"}) {
        RunRequest req{cmd, cfg, 11, dir / side / cfg.stem()};
        int code = run_command(req, sink, sink);
        if (code == 1) ++mismatches;
        m.push_back(read_manifest(dir / side / cfg.stem() / (cmd + ".manifest.json")));
      }
      ++runs;
      bool same = m[0].outputs.size() == m[1].outputs.size() && !m[0].outputs.empty();
      for (std::size_t i = 0; same && i < m[0].outputs.size(); ++i)
        same = m[0].outputs[i].sha256 == m[1].outputs[i].sha256;
      if (!same) ++mismatches;
    }
  }
  return {mismatches == 0 && runs > 0,
          std::to_string(runs) + " commands, " + std::to_string(mismatches) + " mismatches"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    const char* what;
    std::function<Outcome()> fn;
    double limit;  // seconds, 0 for none
  };
  const std::vector<Criterion> all = {
      {"AC1", "cocycle identity", ac1, 10.0},
      {"AC2", "skew/translation commutation", ac2, 0.0},
      {"AC3", "Gottschalk-Hedlund round trip", ac3, 60.0},
      {"AC4", "ex:zi essential range {0}", ac4, 300.0},
      {"AC5", "ex:zi orbit closure", ac5, 0.0},
      {"AC6", "ex:pe decomposition", ac6, 600.0},
      {"AC7", "transience and surjectivity", ac7, 0.0},
      {"AC8", "range symmetry and cohomology invariance", ac8, 0.0},
      {"AC9", "reproducible digests", ac9, 0.0},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double t = seconds_since(t0);
    bool slow = c.limit > 0.0 && t > c.limit;
    bool pass = o.pass && !slow;
    if (!pass) ++failed;
    std::printf("%s %s: %s: %s; %.1fs%s\n", c.name, pass ? "PASS" : "FAIL", c.what,
                o.detail.c_str(), t, slow ? " (over time limit)" : "");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
