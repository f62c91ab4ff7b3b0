#include <cmath>
#include <cstdlib>

#include "skewlab/cli.hpp"
#include "skewlab/constants.hpp"

namespace skewlab {

namespace {

constexpr std::int64_t kRotationQ = std::int64_t{1} << 62;
constexpr std::int64_t kFlowQ = std::int64_t{1} << 31;

bool is_constant(const std::string& s) {
  for (const auto& n : shipped_constant_names())
    if (n == s) return true;
  return false;
}

long double parse_real(const std::string& s, SourceLocation loc) {
  if (is_constant(s)) return shipped_constant(s).value;
  char* end = nullptr;
  long double v = std::strtold(s.c_str(), &end);
  if (end == s.c_str() + s.size() && std::isfinite(v)) return v;
  return parse_number(s, loc);
}

template <class F>
auto located(const ConfigBlock& b, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const UsageError& e) {
    b.fail(e.what());
  }
}

BaseSystem build_rotation(const ConfigBlock& b, const ConfigEntry& e) {
  auto items = split_list(e);
  if (items.size() == 1 && is_constant(items[0].first)) {
    const auto& c = shipped_constant(items[0].first);
    return BaseSystem::rotation({c.turn}, c.provenance, c.convergents);
  }
  std::vector<Turn> alpha;
  for (auto& [s, loc] : items)
    alpha.push_back(is_constant(s) ? shipped_constant(s).turn
                                   : Turn::from_long_double(parse_real(s, loc)));
  std::vector<Convergent> conv;
  if (alpha.size() == 1) conv = turn_convergents(alpha[0], kRotationQ);
  return located(b, [&] { return BaseSystem::rotation(alpha, "config: alpha = " + e.value, conv); });
}

BaseSystem build_flow(const ConfigBlock& b, const ConfigEntry& e) {
  auto items = split_list(e);
  std::vector<long double> dir;
  for (auto& [s, loc] : items) dir.push_back(parse_real(s, loc));
  std::vector<Convergent> conv;
  std::string provenance = "config: direction = " + e.value;
  if (dir.size() == 2 && dir[0] == 1.0L && dir[1] > 0.0L) {
    if (is_constant(items[1].first)) {
      const auto& c = shipped_constant(items[1].first);
      conv = c.convergents;
      provenance = c.provenance;
    } else {
      conv = real_convergents(dir[1], kFlowQ);
    }
  }
  return located(b, [&] { return BaseSystem::linear_flow(dir, provenance, conv); });
}

BaseSystem build_base(const ConfigBlock& b) {
  std::string kind = b.word("kind");
  if (kind == "rotation") {
    const ConfigEntry* e = b.entry("alpha");
    if (!e) b.fail("missing required key 'alpha'");
    return build_rotation(b, *e);
  }
  if (kind == "flow") {
    const ConfigEntry* e = b.entry("direction");
    if (!e) b.fail("missing required key 'direction'");
    return build_flow(b, *e);
  }
  b.fail("kind", "expected 'rotation' or 'flow'");
}

// Terms from an optional small-divisor block followed by explicit terms.
CocycleSpec build_terms(const ConfigBlock& b, const BaseSystem& base,
                        std::optional<SmallDivisorReport>& report) {
  CocycleSpec spec;
  spec.base = base;
  spec.mode = base.discrete() ? CocycleMode::GeneratorFunction : CocycleMode::FlowGenerator;
  if (const ConfigBlock* sd = b.block("small-divisor")) {
    for (const char* key : {"levels", "decay"})
      if (!sd->has(key)) sd->fail("missing required key '" + std::string(key) + "'");
    std::int64_t levels = sd->integer("levels", 0);
    double decay = sd->positive("decay", 0.0);
    auto r = located(*sd, [&] { return small_divisor_builder(base, static_cast<int>(levels), decay); });
    spec.terms = r.spec.terms;
    report = r.report;
  }
  for (const ConfigBlock* t : b.all_blocks("term")) {
    TrigTerm term;
    term.freq = t->integers("freq");
    term.amplitude = t->number("amplitude");
    term.phase = t->number("phase", 0.0);
    spec.terms.push_back(term);
  }
  if (b.has("target")) {
    double target = b.positive("target", 0.0);
    spec = located(b, [&] { return rescale_perturbation(spec, target); });
  }
  return spec;
}

TorusPoint point_of(const ConfigBlock& b, std::string_view key, std::size_t dim) {
  if (!b.has(key)) return TorusPoint(dim);
  auto v = b.numbers(key);
  if (v.size() != dim)
    b.fail(key, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(v.size()));
  TorusPoint p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = Turn::from_double(v[i] - std::floor(v[i]));
  return p;
}

}  // namespace

SystemConfig build_system(const ConfigBlock& sys) {
  SystemConfig out;
  out.name = sys.word("name", "system");
  const ConfigBlock* base_block = sys.block("base");
  if (!base_block) sys.fail("missing required block 'base'");
  BaseSystem base = build_base(*base_block);

  const ConfigBlock* cb = sys.block("cocycle");
  if (!cb) sys.fail("missing required block 'cocycle'");
  CocycleSpec spec = build_terms(*cb, base, out.cocycle_report);
  spec.drift = cb->number("drift", 0.0);
  auto cocycle = located(*cb, [&] { return make_cocycle(spec); });

  std::optional<RokhlinFiber> fiber;
  if (const ConfigBlock* rb = sys.block("rokhlin")) {
    const ConfigEntry* e = rb->entry("direction");
    if (!e) rb->fail("missing required key 'direction'");
    RokhlinFiber rf;
    rf.flow = build_flow(*rb, *e);
    if (const ConfigBlock* pb = rb->block("perturbation")) {
      CocycleSpec g = build_terms(*pb, rf.flow, out.perturbation_report);
      double sum = 0.0;
      for (const auto& t : g.terms) sum += std::fabs(t.amplitude);
      if (sum > kPerturbationBound)
        pb->fail("certificate violated: sum |amplitude| = " + std::to_string(sum) + " exceeds 1/4");
      if (pb->has("certificate")) {
        double stated = pb->positive("certificate", 0.0);
        if (stated > kPerturbationBound) pb->fail("certificate", "must not exceed 1/4");
        if (sum > stated * (1.0 + 1e-12))
          pb->fail("certificate", "sum |amplitude| = " + std::to_string(sum) + " exceeds it");
      }
      rf.perturbation = g;
    }
    fiber = rf;
  }
  out.system = located(sys, [&] { return SkewSystem(cocycle, fiber); });

  out.start.x = TorusPoint(base.dim());
  if (fiber) out.start.m = TorusPoint(fiber->flow.dim());
  if (const ConfigBlock* st = sys.block("start")) {
    out.start.x = point_of(*st, "x", base.dim());
    if (fiber)
      out.start.m = point_of(*st, "m", fiber->flow.dim());
    else if (st->has("m"))
      st->fail("m", "the system has no fiber");
    out.start.a = st->number("a", 0.0);
  }
  return out;
}

}  // namespace skewlab
