#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "skewlab/analysis.hpp"
#include "skewlab/cli.hpp"
#include "skewlab/hyperspace.hpp"
#include "skewlab/rng.hpp"

#ifndef SKEWLAB_VERSION
#define SKEWLAB_VERSION "dev"
#endif

namespace skewlab {

const char* tool_version() { return SKEWLAB_VERSION; }

namespace {

// ---------------------------------------------------------------------------
// Per-command options, all parsed before anything runs.

struct OrbitCmd {
  std::int64_t steps = 1000;
  std::int64_t stride = 1;
  double time_step = 0.01;
};

struct CheckCmd {
  std::size_t samples = 10'000;
  double tolerance = 1e-9;
};

struct RangeCmd {
  RangeOptions opt;
  std::optional<std::vector<double>> expect;
};

struct CoboundaryCmd {
  GHOptions opt;
  std::string expect;
};

struct RecurrenceCmd {
  RecurrenceOptions opt;
  std::string expect;
};

struct TrivialityCmd {
  TrivialityOptions opt;
  double lift = 1.0;
  PhaseGenerator extra;
  std::optional<double> max_ratio;
};

struct RimCmd {
  std::size_t fiber_cells = 32;
  std::size_t split = 0;
  std::size_t grid = 256;
  std::size_t samples = 1000;
  double tolerance = 1e-6;
};

struct HyperCmd {
  double radius = 8.0;
  double h = 1.0 / 128;
  ProlongationOptions prolong;
};

struct DecomposeCmd {
  HyperCmd geo;
  std::size_t pairs = 50;
  std::int64_t max_shift = 200'000;
};

struct MackeyCmd {
  HyperCmd geo;  // radius is the output window
  double d0_radius = 16.0;
  double B = 8.0;
  std::size_t samples = 50;
  double a_range = 2.0;
  std::int64_t max_shift = 200'000;
  double threshold = 0.0;  // 0 means 5h
};

struct SurjectivityCmd {
  std::size_t m_samples = 64;
  double radius = 8.0;
  double h = 1.0 / 128;
};

struct AnalysisConfig {
  OrbitCmd orbit;
  CheckCmd check;
  RangeCmd range;
  CoboundaryCmd coboundary;
  RecurrenceCmd recurrence;
  TrivialityCmd triviality;
  GapOptions gap;
  RimCmd rim;
  HyperCmd prolongation;
  DecomposeCmd decompose;
  MackeyCmd mackey;
  SurjectivityCmd surjectivity;
};

std::string one_of(const ConfigBlock& b, std::string_view key,
                   std::initializer_list<const char*> allowed) {
  std::string v = b.word(key, "");
  if (v.empty()) return v;
  for (const char* a : allowed)
    if (v == a) return v;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  b.fail(key, "expected one of " + list);
}

std::size_t size_of(const ConfigBlock& b, std::string_view key, std::size_t fallback,
                    std::size_t min = 1) {
  std::uint64_t v = b.count(key, fallback);
  if (v < min) b.fail(key, "must be at least " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

std::vector<double> positive_list(const ConfigBlock& b, std::string_view key,
                                  std::vector<double> fallback) {
  if (!b.has(key)) return fallback;
  auto v = b.numbers(key);
  for (double x : v)
    if (!(x > 0.0)) b.fail(key, "every entry must be strictly positive");
  return v;
}

void parse_hyper(const ConfigBlock& b, HyperCmd& c) {
  c.radius = b.positive("radius", c.radius);
  c.h = b.positive("h", c.h);
  auto& cl = c.prolong.closure;
  cl.steps = b.integer("steps", cl.steps);
  if (cl.steps < 1) b.fail("steps", "must be at least 1");
  cl.time_step = b.positive("time_step", cl.time_step);
  cl.horizon = b.positive("horizon", cl.horizon);
  c.prolong.starts = static_cast<int>(size_of(b, "starts", 2));
  c.prolong.eps = positive_list(b, "eps", {});
}

AnalysisConfig parse_analysis(const ConfigBlock* a) {
  AnalysisConfig c;
  if (!a) return c;
  if (auto* b = a->block("orbit")) {
    c.orbit.steps = b->integer("steps", c.orbit.steps);
    if (c.orbit.steps < 0) b->fail("steps", "must not be negative");
    c.orbit.stride = b->integer("stride", c.orbit.stride);
    if (c.orbit.stride < 1) b->fail("stride", "must be at least 1");
    c.orbit.time_step = b->positive("time_step", c.orbit.time_step);
  }
  if (auto* b = a->block("check-cocycle")) {
    c.check.samples = size_of(*b, "samples", c.check.samples);
    c.check.tolerance = b->positive("tolerance", c.check.tolerance);
  }
  if (auto* b = a->block("essential-range")) {
    auto& o = c.range.opt;
    o.window = b->positive("window", o.window);
    o.delta = b->positive("delta", o.delta);
    o.eps = b->positive("eps", o.eps);
    o.budget = b->count("budget", o.budget);
    o.lag_limit = b->integer("lag_limit", o.lag_limit);
    if (b->has("expect")) c.range.expect = b->numbers("expect");
  }
  if (auto* b = a->block("coboundary")) {
    auto& o = c.coboundary.opt;
    o.steps = b->integer("steps", o.steps);
    o.h = b->positive("h", o.h);
    c.coboundary.expect = one_of(*b, "expect", {"coboundary", "not-coboundary"});
  }
  if (auto* b = a->block("recurrence")) {
    auto& o = c.recurrence.opt;
    o.budget = b->count("budget", o.budget);
    o.a0 = b->number("a0", o.a0);
    o.scales = positive_list(*b, "scales", o.scales);
    o.starts = size_of(*b, "starts", o.starts);
    o.margin = b->positive("margin", o.margin);
    o.escape_threshold = b->positive("escape_threshold", o.escape_threshold);
    c.recurrence.expect = one_of(*b, "expect", {"recurrent", "transient"});
  }
  if (auto* b = a->block("relative-triviality")) {
    auto& o = c.triviality.opt;
    o.eps = positive_list(*b, "eps", o.eps);
    o.budget = b->count("budget", o.budget);
    o.orbit_length = b->integer("orbit_length", o.orbit_length);
    if (b->has("max_ratio")) c.triviality.max_ratio = b->positive("max_ratio", 1.0);
    if (auto* g = b->block("generator")) {
      c.triviality.lift = g->number("lift", 0.0);
      c.triviality.extra.drift = g->number("drift", 0.0);
      for (const ConfigBlock* t : g->all_blocks("term")) {
        TrigTerm term;
        term.freq = t->integers("freq");
        term.amplitude = t->number("amplitude");
        term.phase = t->number("phase", 0.0);
        c.triviality.extra.terms.push_back(term);
      }
    }
  }
  if (auto* b = a->block("gap-scan")) {
    c.gap.kappa = b->positive("kappa", c.gap.kappa);
    c.gap.eps = b->positive("eps", c.gap.eps);
    c.gap.budget = b->count("budget", c.gap.budget);
    c.gap.lag_limit = b->integer("lag_limit", c.gap.lag_limit);
  }
  if (auto* b = a->block("rim-project")) {
    c.rim.fiber_cells = size_of(*b, "fiber_cells", c.rim.fiber_cells);
    c.rim.split = size_of(*b, "split", 0, 0);
    c.rim.grid = size_of(*b, "grid", c.rim.grid);
    c.rim.samples = size_of(*b, "samples", c.rim.samples);
    c.rim.tolerance = b->positive("tolerance", c.rim.tolerance);
  }
  if (auto* b = a->block("prolongation")) parse_hyper(*b, c.prolongation);
  if (auto* b = a->block("decompose")) {
    parse_hyper(*b, c.decompose.geo);
    c.decompose.pairs = size_of(*b, "pairs", c.decompose.pairs);
    c.decompose.max_shift = b->integer("max_shift", c.decompose.max_shift);
  }
  if (auto* b = a->block("mackey")) {
    parse_hyper(*b, c.mackey.geo);
    c.mackey.d0_radius = b->positive("d0_radius", 2.0 * c.mackey.geo.radius);
    c.mackey.B = b->positive("B", c.mackey.d0_radius / 2.0);
    c.mackey.samples = size_of(*b, "samples", c.mackey.samples);
    c.mackey.a_range = b->positive("a_range", c.mackey.a_range);
    c.mackey.max_shift = b->integer("max_shift", c.mackey.max_shift);
    c.mackey.threshold = b->positive("threshold", 5.0 * c.mackey.geo.h);
  }
  if (auto* b = a->block("surjectivity")) {
    c.surjectivity.m_samples = size_of(*b, "m_samples", c.surjectivity.m_samples);
    c.surjectivity.radius = b->positive("radius", c.surjectivity.radius);
    c.surjectivity.h = b->positive("h", c.surjectivity.h);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Running

struct Run {
  SystemConfig sys;
  AnalysisConfig a;
  std::uint64_t seed = 1;
  std::vector<std::pair<std::string, std::string>> files;
  std::string result;  // one word for the summary line
  bool violation = false;

  void add(std::string name, std::string content) {
    files.emplace_back(std::move(name), std::move(content));
  }
};

std::string csv_point(const TorusPoint& x) { return format_point(x); }

void cmd_orbit(Run& r) {
  const auto& o = r.a.orbit;
  std::vector<Time> schedule;
  for (std::int64_t k = 0; k <= o.steps; ++k) {
    if (r.sys.system.discrete())
      schedule.emplace_back(k * o.stride);
    else
      schedule.emplace_back(static_cast<double>(k) * o.time_step);
  }
  auto pts = orbit(r.sys.system, r.sys.start, schedule);
  std::ostringstream os;
  write_orbit_csv(os, schedule, pts);
  r.add("orbit.csv", os.str());
  r.result = "points=" + std::to_string(pts.size());
}

void cmd_check(Run& r) {
  const auto& o = r.a.check;
  const SkewSystem& sys = r.sys.system;
  IdentityCheck f = check_identity(sys.cocycle(), o.samples, r.seed);
  std::optional<IdentityCheck> g;
  if (sys.perturbation()) g = check_identity(*sys.perturbation(), o.samples, r.seed + 1);
  // Skew action against right translation, on seeded points.
  Rng rng = Rng(r.seed).split(2);
  double comm = 0.0;
  for (std::size_t i = 0; i < o.samples; ++i) {
    SkewPoint p = random_phase_point(sys, rng.next(), rng.uniform(-10.0, 10.0));
    double b = rng.uniform(-10.0, 10.0);
    Time t = sys.discrete() ? Time{rng.integer(-(1 << 20), 1 << 20)} : Time{rng.uniform(-1000.0, 1000.0)};
    SkewPoint u = skew_act(sys, t, translate(p, b));
    SkewPoint v = translate(skew_act(sys, t, p), b);
    double d = std::max(phase_distance(u, v), std::fabs(u.a - v.a));
    comm = std::max(comm, d);
  }
  bool bad = f.max_residual > o.tolerance || (g && g->max_residual > o.tolerance) ||
             comm > o.tolerance;
  std::ostringstream os;
  os << "report=check-cocycle\n"
     << "samples=" << o.samples << '\n'
     << "tolerance=" << format_double(o.tolerance) << '\n'
     << "identity_residual=" << format_double(f.max_residual) << '\n';
  if (g) os << "perturbation_identity_residual=" << format_double(g->max_residual) << '\n';
  os << "commutation_residual=" << format_double(comm) << '\n'
     << "result=" << (bad ? "Violation" : "Clean") << '\n'
     << "\ncheck,residual,tau,tau2,x\n"
     << "identity," << format_double(f.max_residual) << ',' << describe(f.tau) << ','
     << describe(f.tau2) << ',' << csv_point(f.x) << '\n';
  if (g)
    os << "perturbation_identity," << format_double(g->max_residual) << ',' << describe(g->tau)
       << ',' << describe(g->tau2) << ',' << csv_point(g->x) << '\n';
  r.add("check_cocycle.txt", os.str());
  r.violation = bad;
  r.result = "identity_residual=" + format_double(f.max_residual);
}

void cmd_range(Run& r) {
  auto opt = r.a.range.opt;
  opt.seed = r.seed;
  auto rep = estimate_essential_range(r.sys.system, opt);
  std::ostringstream os;
  write_report(os, rep);
  r.add("essential_range.txt", os.str());
  std::string vals;
  for (const auto& c : rep.candidates) vals += (vals.empty() ? "" : ";") + format_double(c.value);
  r.result = "candidates={" + vals + "}";
  bool bad = !rep.symmetric();
  if (r.a.range.expect) {
    const auto& e = *r.a.range.expect;
    bad = bad || e.size() != rep.candidates.size();
    for (double v : e) bad = bad || !rep.has(v);
  }
  r.violation = bad;
}

void cmd_coboundary(Run& r) {
  std::ostringstream os;
  std::string verdict;
  try {
    auto res = gottschalk_hedlund(r.sys.system, r.a.coboundary.opt);
    write_report(os, res);
    verdict = res.coboundary ? "coboundary" : "not-coboundary";
    r.result = res.coboundary ? "Coboundary" : "NotCoboundary";
  } catch (const InconclusiveError& e) {
    os << "report=coboundary\nresult=Inconclusive\nreason=" << e.what() << "\n\n";
    verdict = "inconclusive";
    r.result = "Inconclusive";
  }
  r.add("coboundary.txt", os.str());
  r.violation = !r.a.coboundary.expect.empty() && r.a.coboundary.expect != verdict;
}

void cmd_recurrence(Run& r) {
  auto opt = r.a.recurrence.opt;
  opt.seed = r.seed;
  auto rep = classify_recurrence(r.sys.system, opt);
  std::ostringstream os;
  write_report(os, rep);
  r.add("recurrence.txt", os.str());
  r.result = to_string(rep.verdict);
  const std::string& e = r.a.recurrence.expect;
  r.violation = (e == "recurrent" && rep.verdict != Recurrence::Recurrent) ||
                (e == "transient" && rep.verdict != Recurrence::Transient);
}

void cmd_triviality(Run& r) {
  const auto& c = r.a.triviality;
  PhaseGenerator g;
  if (c.lift != 0.0) g = lift_generator(r.sys.system, c.lift);
  g.drift += c.extra.drift;
  for (const auto& t : c.extra.terms) {
    if (t.freq.size() != r.sys.system.phase_dim())
      throw UsageError("generator term frequency needs " +
                       std::to_string(r.sys.system.phase_dim()) + " entries");
    g.terms.push_back(t);
  }
  auto opt = c.opt;
  opt.seed = r.seed;
  auto rep = relative_triviality(r.sys.system, g, opt);
  std::ostringstream os;
  write_report(os, rep);
  r.add("relative_triviality.txt", os.str());
  double worst = 0.0;
  for (const auto& row : rep.rows)
    if (!row.no_data) worst = std::max(worst, row.max_f2 / row.eps);
  r.result = "max_ratio=" + format_double(worst);
  r.violation = c.max_ratio && worst > *c.max_ratio;
}

void cmd_gap(Run& r) {
  auto opt = r.a.gap;
  opt.seed = r.seed;
  auto rep = gap_scan(r.sys.system, opt);
  std::ostringstream os;
  write_report(os, rep);
  r.add("gap_scan.txt", os.str());
  r.result = rep.clean ? "Clean" : "Violation";
  r.violation = !rep.clean;
}

void cmd_rim(Run& r) {
  const auto& c = r.a.rim;
  std::unique_ptr<RimProjection> p;
  if (c.split > 0) {
    auto trig = std::dynamic_pointer_cast<const TrigCocycle>(r.sys.system.cocycle_ptr());
    if (!trig) throw UnsupportedError("rim-project with split needs a trigonometric cocycle");
    p = std::make_unique<RimProjection>(trig, c.split, c.fiber_cells);
  } else {
    p = std::make_unique<RimProjection>(r.sys.system, c.fiber_cells);
  }
  auto id = check_identity(*p, c.samples, r.seed);
  const std::size_t dim = p->base().dim();
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    total *= c.grid;
    if (total > (std::size_t{1} << 22)) throw UsageError("rim-project grid too large");
  }
  std::ostringstream os;
  os << "report=rim-project\n"
     << "fiber_nodes=" << p->fiber_nodes() << '\n'
     << "grid=" << c.grid << '\n'
     << "identity_residual=" << format_double(id.max_residual) << '\n'
     << "tolerance=" << format_double(c.tolerance) << '\n'
     << "\nx,generator\n";
  for (std::size_t i = 0; i < total; ++i) {
    TorusPoint x(dim);
    std::size_t rest = i;
    for (std::size_t d = dim; d-- > 0;) {
      x[d] = Turn::from_double(static_cast<double>(rest % c.grid) / static_cast<double>(c.grid));
      rest /= c.grid;
    }
    os << csv_point(x) << ',' << format_double(p->generator(x)) << '\n';
  }
  r.add("rim_project.txt", os.str());
  r.result = "identity_residual=" + format_double(id.max_residual);
  r.violation = id.max_residual > c.tolerance;
}

GridGeometry geometry_of(const Run& r, double radius, double h) {
  return make_geometry(radius, h, r.sys.system.phase_dim());
}

void cmd_prolongation(Run& r) {
  auto c = r.a.prolongation;
  c.prolong.seed = r.seed;
  GridGeometry g = geometry_of(r, c.radius, c.h);
  GridSet d = prolongation(r.sys.system, r.sys.start, g, c.prolong);
  GridSet orb = orbit_closure(r.sys.system, r.sys.start, g, c.prolong.closure);
  double dist = truncated_fell_distance(d, orb);
  std::ostringstream bin;
  write_gridset(bin, d);
  r.add("prolongation.skgs", bin.str());
  auto eps = c.prolong.eps.empty() ? default_eps_schedule(g) : c.prolong.eps;
  std::ostringstream os;
  os << "report=prolongation\n"
     << "start=" << point_columns(r.sys.start) << '\n'
     << "starts=" << c.prolong.starts << '\n';
  os << "eps=";
  for (std::size_t i = 0; i < eps.size(); ++i) os << (i ? ";" : "") << format_double(eps[i]);
  os << "\norbit_distance=" << format_double(dist) << '\n'
     << '\n' << "set," << gridset_summary_header() << '\n'
     << "prolongation," << gridset_summary_row(d) << '\n'
     << "orbit_closure," << gridset_summary_row(orb) << '\n';
  r.add("prolongation.txt", os.str());
  r.result = "cells=" + std::to_string(d.size()) + " orbit_distance=" + format_double(dist);
}

void cmd_decompose(Run& r) {
  const auto& c = r.a.decompose;
  PartitionOptions opt;
  opt.geom = geometry_of(r, c.geo.radius, c.geo.h);
  opt.prolong = c.geo.prolong;
  opt.prolong.seed = r.seed;
  opt.pairs = c.pairs;
  opt.seed = r.seed;
  opt.max_shift = c.max_shift;
  auto rep = verify_partition(r.sys.system, r.sys.start, opt);
  std::ostringstream os;
  os << "report=decompose\n"
     << "pairs=" << rep.pairs << '\n'
     << "coincide=" << rep.coincide << '\n'
     << "disjoint=" << rep.disjoint << '\n'
     << "violations=" << rep.violations << '\n'
     << "\ni,j,same_orbit,distance,coincide,disjoint\n";
  for (const auto& p : rep.records)
    os << p.i << ',' << p.j << ',' << (p.same_orbit ? 1 : 0) << ',' << format_double(p.distance)
       << ',' << (p.coincide ? 1 : 0) << ',' << (p.disjoint ? 1 : 0) << '\n';
  r.add("decompose.txt", os.str());
  r.result = "violations=" + std::to_string(rep.violations);
  r.violation = rep.violations > 0;
}

void cmd_mackey(Run& r) {
  const auto& c = r.a.mackey;
  ProlongationOptions po = c.geo.prolong;
  po.seed = r.seed;
  GridSet d0 = prolongation(r.sys.system, r.sys.start,
                            geometry_of(r, c.d0_radius, c.geo.h), po);
  GridGeometry g = geometry_of(r, c.geo.radius, c.geo.h);
  auto pts = sample_generic_points(r.sys.system, r.sys.start, c.samples, c.a_range,
                                   c.max_shift, r.seed);
  std::vector<GridSet> sets;
  for (const auto& p : pts) sets.push_back(prolongation(r.sys.system, p, g, po));
  const double threshold = c.threshold > 0.0 ? c.threshold : 5.0 * c.geo.h;
  auto rep = mackey_density(d0, c.B, c.geo.radius, sets, threshold);
  std::ostringstream os;
  os << "report=mackey\n"
     << "B=" << format_double(c.B) << '\n'
     << "d0_radius=" << format_double(c.d0_radius) << '\n'
     << "threshold=" << format_double(threshold) << '\n'
     << "samples=" << rep.samples << '\n'
     << "covered=" << rep.covered << '\n'
     << "worst=" << format_double(rep.worst) << '\n'
     << "\nsample,x,m,a,nearest,best_b\n";
  for (std::size_t i = 0; i < rep.nearest.size(); ++i)
    os << i << ',' << point_columns(pts[i]) << ',' << format_double(rep.nearest[i]) << ','
       << format_double(rep.best_b[i]) << '\n';
  r.add("mackey.txt", os.str());
  r.result = "worst=" + format_double(rep.worst);
  r.violation = rep.worst > threshold;
}

void cmd_surjectivity(Run& r) {
  const auto& c = r.a.surjectivity;
  auto rep = surjectivity_check(r.sys.system.cocycle(), c.m_samples, c.radius, c.h, r.seed);
  std::ostringstream os;
  os << "report=surjectivity\n"
     << "samples=" << rep.samples << '\n'
     << "R=" << format_double(c.radius) << '\n'
     << "h=" << format_double(c.h) << '\n'
     << "max_gap=" << format_double(rep.max_gap) << '\n'
     << "covered=" << (rep.covered ? "true" : "false") << '\n'
     << "\nworst_m\n";
  for (std::size_t i = 0; i < rep.worst_m.size(); ++i)
    os << (i ? ";" : "") << format_double(rep.worst_m[i]);
  os << '\n';
  r.add("surjectivity.txt", os.str());
  r.result = "max_gap=" + format_double(rep.max_gap);
  r.violation = !rep.covered;
}

const std::map<std::string, std::function<void(Run&)>>& table() {
  static const std::map<std::string, std::function<void(Run&)>> t = {
      {"orbit", cmd_orbit},
      {"check-cocycle", cmd_check},
      {"essential-range", cmd_range},
      {"coboundary", cmd_coboundary},
      {"recurrence", cmd_recurrence},
      {"relative-triviality", cmd_triviality},
      {"gap-scan", cmd_gap},
      {"rim-project", cmd_rim},
      {"prolongation", cmd_prolongation},
      {"decompose", cmd_decompose},
      {"mackey", cmd_mackey},
      {"surjectivity", cmd_surjectivity},
  };
  return t;
}

}  // namespace

std::vector<std::string> command_names() {
  return {"orbit",     "check-cocycle", "essential-range", "coboundary",
          "recurrence", "relative-triviality", "gap-scan", "rim-project",
          "prolongation", "decompose", "mackey", "surjectivity"};
}

int run_command(const RunRequest& req, std::ostream& out, std::ostream& err) {
  auto t0 = std::chrono::steady_clock::now();
  auto it = table().find(req.command);
  if (it == table().end()) {
    err << "error: unknown command '" << req.command << "'\n";
    return 1;
  }
  Run run;
  std::string text;
  std::filesystem::path dir;
  try {
    text = read_text_file(req.config);
    ConfigBlock root = parse_config(text);
    run.seed = root.count("seed", 1);
    dir = root.word("output", "skewlab-out");
    const ConfigBlock* sys = root.block("system");
    if (!sys) root.fail("missing required block 'system'");
    run.sys = build_system(*sys);
    run.a = parse_analysis(root.block("analysis"));
    root.reject_unused();
  } catch (const UsageError& e) {
    err << req.config.string() << ": " << e.what() << '\n';
    return 1;
  }
  if (req.seed) run.seed = *req.seed;
  if (req.out) dir = *req.out;

  try {
    it->second(run);
  } catch (const EmptySetError& e) {
    err << "error: " << e.what()
        << "\nhint: the orbit or set left the fiber window; raise radius or steps, "
           "or move the start into [-radius, radius]\n";
    return 1;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const InconclusiveError& e) {
    err << "error: inconclusive: " << e.what() << '\n';
    return 1;
  }

  RunManifest m;
  m.command = req.command;
  m.version = tool_version();
  m.config_sha256 = sha256_hex(text);
  m.seed = run.seed;
  m.exit_code = run.violation ? 2 : 0;
  try {
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : run.files) {
      write_file_atomic(dir / name, content);
      m.outputs.push_back({name, sha256_hex(content), content.size()});
    }
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_file_atomic(dir / (req.command + ".manifest.json"), manifest_json(m));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  out << req.command << ": " << run.result << (run.violation ? " (violation)" : "") << '\n';
  return m.exit_code;
}

}  // namespace skewlab
