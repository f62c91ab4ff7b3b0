#include <cmath>
#include <numbers>
#include <optional>

#include "skewlab/errors.hpp"
#include "skewlab/hyperspace.hpp"
#include "skewlab/parallel.hpp"
#include "skewlab/rng.hpp"

namespace skewlab {

namespace {

void check_geometry(const SkewSystem& sys, const GridGeometry& geom) {
  if (geom.torus_dims != sys.phase_dim())
    throw UsageError("grid dimension " + std::to_string(geom.torus_dims) +
                     " does not match phase dimension " + std::to_string(sys.phase_dim()));
}

void add_point(GridBuilder& b, const SkewPoint& p) {
  Turn coords[kMaxTorusDim];
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.x.dim(); ++i) coords[k++] = p.x[i];
  if (p.m)
    for (std::size_t i = 0; i < p.m->dim(); ++i) coords[k++] = (*p.m)[i];
  b.add(coords, p.a);
}

// g(F, m0) for the fixed fiber start of a walk: one sine per term.
class FiberIncrement {
 public:
  FiberIncrement(const SkewSystem& sys, const TorusPoint& m0) {
    const TrigCocycle* g = sys.perturbation();
    if (!g) return;
    const auto& v = g->base().direction();
    for (const TrigTerm& t : g->spec().terms) {
      long double kv = 0;
      for (std::size_t i = 0; i < v.size(); ++i) kv += static_cast<long double>(t.freq[i]) * v[i];
      Term term;
      term.theta = pairing(t.freq, m0) + Turn::from_double(t.phase);
      term.kv = static_cast<double>(kv);
      term.coef = t.amplitude / (kTwoPi * term.kv);
      term.base = std::sin(kTwoPi * term.theta.to_double());
      terms_.push_back(term);
    }
  }
  double operator()(double F) const {
    double s = F;
    for (const Term& t : terms_)
      s += t.coef * (std::sin(kTwoPi * (t.theta + Turn::from_double(t.kv * F)).to_double()) - t.base);
    return s;
  }

 private:
  static constexpr double kTwoPi = 2.0 * std::numbers::pi;
  struct Term {
    Turn theta;
    double kv = 0.0, coef = 0.0, base = 0.0;
  };
  std::vector<Term> terms_;
};

void walk(const SkewSystem& sys, const SkewPoint& start, std::int64_t steps,
          bool forward, GridBuilder& b, double radius) {
  OrbitWalker w(sys, start);
  const std::size_t d = sys.base().dim();
  const bool fiber = sys.has_fiber();
  std::vector<double> v;
  if (fiber)
    for (long double c : sys.fiber_flow().direction()) v.push_back(static_cast<double>(c));
  const TorusPoint* m0 = fiber ? &*start.m : nullptr;
  std::optional<FiberIncrement> inc;
  if (fiber) inc.emplace(sys, *m0);
  // |a - a0| >= (1 - cert) |F|, so far excursions cannot enter the window.
  const double shrink = 1.0 - sys.perturbation_certificate();
  const double reach = radius + std::fabs(start.a) + 1.0;
  Turn coords[kMaxTorusDim];
  for (std::int64_t i = 0;; ++i) {
    double F = w.cocycle_sum();
    if (shrink * std::fabs(F) <= reach) {
      for (std::size_t j = 0; j < d; ++j) coords[j] = w.x()[j];
      double a = start.a + F;
      if (fiber) {
        for (std::size_t j = 0; j < v.size(); ++j) coords[d + j] = (*m0)[j] + Turn::from_double(F * v[j]);
        a = start.a + (*inc)(F);
      }
      b.add(coords, a);
    }
    if (i == steps) break;
    if (forward)
      w.forward();
    else
      w.backward();
  }
}

}  // namespace

GridSet orbit_closure(const SkewSystem& sys, const SkewPoint& start,
                      const GridGeometry& geom, const ClosureOptions& opt) {
  sys.check_point(start);
  check_geometry(sys, geom);
  GridBuilder b(geom);
  if (sys.discrete()) {
    if (opt.steps < 1) throw UsageError("orbit closure needs N >= 1");
    walk(sys, start, opt.steps, true, b, geom.radius);
    walk(sys, start, opt.steps, false, b, geom.radius);
  } else {
    if (!(opt.time_step > 0.0) || !(opt.horizon > 0.0))
      throw UsageError("flow closure needs a positive step and horizon");
    const std::int64_t K = static_cast<std::int64_t>(std::floor(opt.horizon / opt.time_step));
    for (std::int64_t k = -K; k <= K; ++k)
      add_point(b, skew_act(sys, Time{static_cast<double>(k) * opt.time_step}, start));
  }
  return b.build();
}

std::vector<double> default_eps_schedule(const GridGeometry& geom) {
  // The last level is far below any cell boundary spacing the orbit can
  // resolve, so it approximates the limit eps -> 0.
  return {geom.h() / 2.0, 0x1p-40};
}

GridSet prolongation(const SkewSystem& sys, const SkewPoint& center,
                     const GridGeometry& geom, const ProlongationOptions& opt) {
  std::vector<double> eps = opt.eps.empty() ? default_eps_schedule(geom) : opt.eps;
  if (eps.size() < 2) throw UsageError("eps schedule needs at least 2 entries");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw UsageError("eps must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1]))
      throw UsageError("eps schedule must be strictly decreasing");
  }
  if (opt.starts < 1) throw UsageError("prolongation needs K >= 1 starts");
  sys.check_point(center);
  GridSet core = orbit_closure(sys, center, geom, opt.closure);
  const std::size_t extra = static_cast<std::size_t>(opt.starts - 1);
  std::vector<std::optional<GridSet>> orbits(eps.size() * extra);
  parallel_for(orbits.size(), [&](std::size_t slot) {
    std::size_t level = slot / extra, k = slot % extra;
    Rng rng = Rng(opt.seed).split(level).split(k + 1);
    double e = eps[level];
    SkewPoint p = center;
    for (std::size_t i = 0; i < p.x.dim(); ++i) p.x[i] += Turn::from_double(rng.uniform(-e, e));
    if (p.m)
      for (std::size_t i = 0; i < p.m->dim(); ++i) (*p.m)[i] += Turn::from_double(rng.uniform(-e, e));
    p.a += rng.uniform(-e, e);
    try {
      orbits[slot] = orbit_closure(sys, p, geom, opt.closure);
    } catch (const EmptySetError&) {
    }
  });
  std::optional<GridSet> result;
  for (std::size_t level = 0; level < eps.size(); ++level) {
    GridSet u = core;
    for (std::size_t k = 0; k < extra; ++k)
      if (const auto& o = orbits[level * extra + k]) u = set_union(u, *o);
    GridSet closed = u.dilated();
    result = result ? set_intersection(*result, closed) : closed;
  }
  return GridSet(result->geometry(), result->cells(), 1);
}

std::vector<SkewPoint> sample_generic_points(const SkewSystem& sys,
                                             const SkewPoint& generic_start,
                                             std::size_t count, double a_range,
                                             std::int64_t max_shift,
                                             std::uint64_t seed) {
  sys.check_point(generic_start);
  Rng rng(seed);
  std::vector<SkewPoint> out;
  // A skew image keeps genericity only while the base transfer function
  // stays near its value at the generic start, i.e. |f(n, x)| small.
  const double kMaxIncrement = 1.0;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * (count + 1))
      throw InconclusiveError("could not sample generic points");
    SkewPoint p = generic_start;
    if (p.m)
      for (std::size_t i = 0; i < p.m->dim(); ++i) (*p.m)[i] = Turn(rng.next());
    p.a = 0.0;
    Time t = sys.discrete() ? Time{rng.integer(-max_shift, max_shift)}
                            : Time{rng.uniform(-static_cast<double>(max_shift),
                                               static_cast<double>(max_shift))};
    if (std::fabs(sys.cocycle().evaluate(t, p.x)) > kMaxIncrement) continue;
    SkewPoint q = skew_act(sys, t, p);
    q.a = rng.uniform(-a_range, a_range);
    out.push_back(q);
  }
  return out;
}

}  // namespace skewlab
