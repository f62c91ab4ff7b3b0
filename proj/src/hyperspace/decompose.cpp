#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "cell_tree.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/hyperspace.hpp"
#include "skewlab/parallel.hpp"
#include "skewlab/rng.hpp"

namespace skewlab {

namespace {

Time random_time(const SkewSystem& sys, Rng& rng, std::int64_t max_shift) {
  if (sys.discrete()) return Time{rng.integer(-max_shift, max_shift)};
  double T = static_cast<double>(max_shift);
  return Time{rng.uniform(-T, T)};
}

}  // namespace

PartitionReport verify_partition(const SkewSystem& sys,
                                 const SkewPoint& generic_start,
                                 const PartitionOptions& opt) {
  if (opt.pairs == 0) throw UsageError("verify_partition needs at least one pair");
  const double R = opt.geom.radius;
  const std::size_t n_base = std::max<std::size_t>(2, opt.pairs / 5);
  Rng rng(opt.seed);
  PartitionReport rep;
  rep.points = sample_generic_points(sys, generic_start, n_base, R / 4.0,
                                     opt.max_shift, rng.split(1).next());
  // Siblings: skew images of the base points, on the same prolongation.
  Rng srng = rng.split(2);
  for (std::size_t i = 0; i < n_base; ++i) {
    const SkewPoint& p = rep.points[i];
    for (int attempt = 0;; ++attempt) {
      if (attempt > 100000) throw InconclusiveError("no sibling inside the window");
      Time t = random_time(sys, srng, opt.max_shift);
      if (std::fabs(sys.cocycle().evaluate(t, p.x)) > 1.0) continue;
      SkewPoint q = skew_act(sys, t, p);
      if (std::fabs(q.a) > R / 2.0) continue;
      rep.points.push_back(q);
      break;
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < n_base && pairs.size() < opt.pairs; ++i) {
    pairs.push_back({i, n_base + i});
    seen.insert({i, n_base + i});
  }
  Rng prng = rng.split(3);
  const std::size_t pool = rep.points.size();
  while (pairs.size() < opt.pairs) {
    std::size_t i = static_cast<std::size_t>(prng.integer(0, static_cast<std::int64_t>(pool) - 1));
    std::size_t j = static_cast<std::size_t>(prng.integer(0, static_cast<std::int64_t>(pool) - 1));
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (seen.count({i, j}) && seen.size() < pool * (pool - 1) / 2) continue;
    seen.insert({i, j});
    pairs.push_back({i, j});
  }
  std::vector<std::optional<GridSet>> D(pool);
  std::vector<std::vector<std::uint64_t>> core(pool);
  parallel_for(pool, [&](std::size_t i) {
    ProlongationOptions po = opt.prolong;
    po.seed = Rng(opt.prolong.seed).split(100 + i).next();
    D[i] = prolongation(sys, rep.points[i], opt.geom, po);
    core[i] = D[i]->eroded_cells();
  });
  const double tol = 2.0 * opt.geom.h() + 1e-12;
  for (auto [i, j] : pairs) {
    PairRecord r;
    r.i = i;
    r.j = j;
    r.same_orbit = j == i + n_base;
    auto d = distance_within(*D[i], *D[j], tol);
    r.coincide = d.has_value();
    r.distance = d ? *d : -1.0;
    r.disjoint = !intersects(core[i], core[j]);
    ++rep.pairs;
    if (r.coincide) ++rep.coincide;
    if (r.disjoint) ++rep.disjoint;
    if (!r.coincide && !r.disjoint) ++rep.violations;
    rep.records.push_back(r);
  }
  return rep;
}

GridSet mackey_translate(const GridSet& d0, std::int64_t k, double out_radius) {
  const GridGeometry& g0 = d0.geometry();
  GridGeometry g = make_geometry(out_radius, g0.h(), g0.torus_dims);
  const std::int64_t F = g0.fiber_cells(), G = g.fiber_cells();
  if (G > F) throw UsageError("output radius exceeds the radius of D0");
  const std::int64_t off = (F - G) / 2;
  std::vector<std::uint64_t> out;
  out.reserve(d0.size());
  for (std::uint64_t c : d0.cells()) {
    // R_b(x, a) = (x, a - b): the fiber cell moves down by k.
    std::int64_t f = static_cast<std::int64_t>(c % static_cast<std::uint64_t>(F)) - k - off;
    if (f < 0 || f >= G) continue;
    out.push_back((c / static_cast<std::uint64_t>(F)) * static_cast<std::uint64_t>(G) +
                  static_cast<std::uint64_t>(f));
  }
  if (out.empty()) throw EmptySetError("translate leaves the window");
  return GridSet(g, std::move(out), d0.dilations());
}

namespace {

std::int64_t grid_steps(const GridSet& d0, double B) {
  if (!(B >= 0.0)) throw UsageError("Mackey range B must be >= 0");
  if (B > d0.geometry().radius / 2.0 + 1e-12)
    throw UsageError("Mackey range B must not exceed R/2");
  return static_cast<std::int64_t>(std::floor(B * d0.geometry().cells_per_unit + 1e-9));
}

}  // namespace

MackeyOrbit mackey_flow(const GridSet& d0, double B, double out_radius) {
  std::int64_t K = grid_steps(d0, B);
  MackeyOrbit out;
  for (std::int64_t k = -K; k <= K; ++k) {
    out.b.push_back(static_cast<double>(k) * d0.geometry().h());
    out.sets.push_back(mackey_translate(d0, k, out_radius));
  }
  return out;
}

namespace {

// Truncated Fell distance in cells between S and R_b D0 cropped to S's
// window, where the fiber cell of D0 moves down by `shift`. Returns any
// value >= `abort_at` once the distance is known to reach it.
std::int64_t translate_cells(const GridSet& d0, const detail::CellTree& t0,
                             const GridSet& S, const detail::CellTree& ts,
                             std::int64_t shift, std::int64_t abort_at) {
  const std::size_t f = S.geometry().torus_dims;
  const std::int64_t G = S.geometry().fiber_cells();
  const std::uint64_t F0 = static_cast<std::uint64_t>(d0.geometry().fiber_cells());
  const std::int64_t lo = shift, hi = shift + G - 1;
  std::int64_t worst = 0;
  std::size_t in_window = 0;
  for (std::uint64_t c : d0.cells()) {
    std::int64_t fc = static_cast<std::int64_t>(c % F0);
    if (fc < lo || fc > hi) continue;
    ++in_window;
    CellCoord q = d0.decode(c);
    q[f] -= shift;
    if (S.contains(S.encode(q))) continue;
    worst = std::max(worst, ts.nearest(q, worst));
    if (worst >= abort_at) return worst;
  }
  if (in_window == 0) return std::numeric_limits<std::int64_t>::max();
  for (std::uint64_t c : S.cells()) {
    CellCoord q = S.decode(c);
    q[f] += shift;
    if (d0.contains(d0.encode(q))) continue;
    worst = std::max(worst, t0.nearest(q, worst, lo, hi));
    if (worst >= abort_at) return worst;
  }
  return worst;
}

}  // namespace

DensityReport mackey_density(const GridSet& d0, double B, double out_radius,
                             const std::vector<GridSet>& samples,
                             double threshold) {
  const std::int64_t K = grid_steps(d0, B);
  const GridGeometry& g0 = d0.geometry();
  const GridGeometry gout = make_geometry(out_radius, g0.h(), g0.torus_dims);
  if (gout.fiber_cells() > g0.fiber_cells())
    throw UsageError("output radius exceeds the radius of D0");
  const std::int64_t off = (g0.fiber_cells() - gout.fiber_cells()) / 2;
  const detail::CellTree tree(d0);
  const std::size_t fiber_axis = g0.torus_dims;
  const double h = g0.h();
  DensityReport rep;
  rep.samples = samples.size();
  rep.nearest.assign(samples.size(), 0.0);
  rep.best_b.assign(samples.size(), 0.0);
  parallel_for(samples.size(), [&](std::size_t s) {
    const GridSet& S = samples[s];
    if (!(S.geometry() == gout))
      throw UsageError("Mackey samples must use the output window geometry");
    // Lower bounds on the distance from S to R_b D0 from probe cells spread
    // over the sorted index range: a coarse pass over every k, then a finer
    // pass over the most promising ones.
    auto probes = [&](std::size_t n) {
      n = std::min(n, S.size());
      std::vector<CellCoord> out;
      for (std::size_t i = 0; i < n; ++i) out.push_back(S.decode(S.cells()[i * S.size() / n]));
      return out;
    };
    auto bound = [&](const std::vector<CellCoord>& ps, std::int64_t k) {
      std::int64_t worst = 0;
      for (CellCoord q : ps) {
        q[fiber_axis] += k + off;
        worst = std::max(worst, tree.nearest(q, worst));
      }
      return worst;
    };
    const auto coarse = probes(8), fine = probes(64);
    std::vector<std::pair<std::int64_t, std::int64_t>> lb;
    for (std::int64_t k = -K; k <= K; ++k) lb.push_back({bound(coarse, k), k});
    std::sort(lb.begin(), lb.end());
    lb.resize(std::min<std::size_t>(lb.size(), 48));
    for (auto& e : lb) e.first = std::max(e.first, bound(fine, e.second));
    std::sort(lb.begin(), lb.end());
    const detail::CellTree ts(S);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    std::int64_t best_k = 0;
    const auto stop = static_cast<std::int64_t>(std::floor(threshold / h + 1e-9));
    for (std::size_t c = 0; c < lb.size() && c < 12; ++c) {
      if (lb[c].first >= best) break;
      std::int64_t d = translate_cells(d0, tree, S, ts, lb[c].second + off, best);
      if (d < best) {
        best = d;
        best_k = lb[c].second;
      }
      if (best <= stop) break;
    }
    rep.nearest[s] = best == std::numeric_limits<std::int64_t>::max()
                         ? std::numeric_limits<double>::infinity()
                         : static_cast<double>(best) * h;
    rep.best_b[s] = static_cast<double>(best_k) * h;
  });
  for (double d : rep.nearest) {
    rep.worst = std::max(rep.worst, d);
    if (d <= threshold + 1e-12) ++rep.covered;
  }
  return rep;
}

SurjectivityReport surjectivity_check(const Cocycle& cocycle,
                                      std::size_t m_samples, double R,
                                      double h, std::uint64_t seed) {
  const BaseSystem& base = cocycle.base();
  if (base.discrete()) throw UsageError("surjectivity check needs a flow cocycle");
  if (!(R > 0.0) || !(h > 0.0)) throw UsageError("surjectivity check needs R, h > 0");
  Rng rng(seed);
  SurjectivityReport rep;
  rep.samples = m_samples;
  rep.covered = true;
  const double dt = h / 2.0;
  const std::int64_t limit = static_cast<std::int64_t>(std::ceil(100.0 * R / dt));
  for (std::size_t s = 0; s < m_samples; ++s) {
    TorusPoint m(base.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) m[i] = Turn(rng.next());
    std::vector<double> vals;
    bool reach_hi = false, reach_lo = false;
    for (int dir : {+1, -1}) {
      for (std::int64_t k = dir > 0 ? 0 : 1; k <= limit; ++k) {
        double v = cocycle.evaluate(Time{dir * static_cast<double>(k) * dt}, m);
        if (v >= -R && v <= R) vals.push_back(v);
        if (v > R) reach_hi = true;
        if (v < -R) reach_lo = true;
        if ((dir > 0 && v > R) || (dir < 0 && v < -R)) break;
      }
    }
    double gap = 2.0 * R;
    if (!vals.empty() && reach_hi && reach_lo) {
      std::sort(vals.begin(), vals.end());
      gap = std::max(vals.front() + R, R - vals.back());
      for (std::size_t i = 1; i < vals.size(); ++i) gap = std::max(gap, vals[i] - vals[i - 1]);
    }
    if (gap > rep.max_gap) {
      rep.max_gap = gap;
      rep.worst_m = m.to_doubles();
    }
    if (!(gap < 2.0 * h)) rep.covered = false;
  }
  return rep;
}

}  // namespace skewlab
