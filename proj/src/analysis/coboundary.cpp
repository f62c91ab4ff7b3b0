#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "skewlab/analysis.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/parallel.hpp"

namespace skewlab {

namespace {

Time sample_time(const BaseSystem& base, double step, std::int64_t k) {
  if (base.discrete()) return Time{k};
  return Time{static_cast<double>(k) * step};
}

// Nearest grid node of x, as a flat index.
std::size_t node_index(const TorusPoint& x, std::size_t n) {
  std::size_t index = 0, stride = 1;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    auto pos = static_cast<unsigned __int128>(x[i].raw()) * n + (static_cast<unsigned __int128>(1) << 63);
    index += (static_cast<std::size_t>(pos >> 64) % n) * stride;
    stride *= n;
  }
  return index;
}

double node_gap(const TorusPoint& x, const TorusPoint& node) { return distance(x, node); }

GHWitness find_witness(const Cocycle& f, const BaseSystem& base, const TorusPoint& xbar,
                       const std::vector<Time>& times, const std::vector<TorusPoint>& xs,
                       double h) {
  std::vector<Time> cands;
  for (const Convergent& c : base.convergents())
    if (c.q > 0) cands.push_back(base.discrete() ? Time{c.q} : Time{static_cast<double>(c.q)});
  // Orbit times that return within h, latest first.
  for (std::size_t k = times.size(); k-- > 1 && cands.size() < 256;)
    if (distance(xs[k], xbar) < h) cands.push_back(times[k]);
  std::vector<TorusPoint> probes{xbar};
  for (std::size_t j = 1; j < 64; ++j) probes.push_back(xs[j * (xs.size() - 1) / 63]);
  // Largest |f| among returns closer than h; the closest return otherwise.
  bool any_close = false;
  double closest = std::numeric_limits<double>::infinity();
  for (const Time& t : cands) {
    double disp = distance(xbar, base.act(t, xbar));
    any_close = any_close || disp < h;
    closest = std::min(closest, disp);
  }
  GHWitness best;
  best.displacement = std::numeric_limits<double>::infinity();
  bool first = true;
  for (const Time& t : cands) {
    double disp = distance(xbar, base.act(t, xbar));
    if (any_close ? !(disp < h) : disp != closest) continue;
    for (const TorusPoint& x : probes) {
      double v = f.evaluate(t, x);
      if (first || std::fabs(v) > std::fabs(best.value)) {
        best = {t, x, v, distance(x, base.act(t, x))};
        first = false;
      }
    }
  }
  return best;
}

}  // namespace

GHResult gottschalk_hedlund(const SkewSystem& sys, const GHOptions& opt) {
  const BaseSystem& base = sys.base();
  const Cocycle& f = sys.cocycle();
  if (opt.steps < 10'000) throw UsageError("Gottschalk-Hedlund needs N >= 10^4");
  if (!(opt.h > 0.0)) throw UsageError("Gottschalk-Hedlund needs h > 0");
  const double nd = 1.0 / opt.h;
  if (std::fabs(nd - std::round(nd)) > 1e-9 || nd < 2.0)
    throw UsageError("grid h must be 1/n with n >= 2");
  const auto n = static_cast<std::size_t>(std::llround(nd));
  const std::size_t d = base.dim();
  long double bins_ld = std::pow(static_cast<long double>(n), static_cast<long double>(d));
  if (bins_ld > 16777216.0L) throw UsageError("grid has more than 2^24 bins");
  const auto bins = static_cast<std::size_t>(bins_ld);
  TorusPoint xbar = opt.start ? *opt.start : TorusPoint(d);
  base.check_point(xbar);

  GHResult res;
  res.steps = opt.steps;
  res.h = opt.h;
  res.tolerance = std::max(10.0 * opt.h, 1e-6);
  double step = 1.0;
  if (!base.discrete()) {
    long double vmax = 0;
    for (long double v : base.direction()) vmax = std::max(vmax, std::fabs(v));
    step = static_cast<double>(static_cast<long double>(opt.h) / (2.0L * vmax));
  }
  const auto N = static_cast<std::size_t>(opt.steps);
  std::vector<Time> times(N);
  std::vector<TorusPoint> xs(N);
  std::vector<double> F(N);
  parallel_for((N + 4095) / 4096, [&](std::size_t chunk) {
    for (std::size_t k = chunk * 4096; k < std::min(N, (chunk + 1) * 4096); ++k) {
      times[k] = sample_time(base, step, static_cast<std::int64_t>(k));
      xs[k] = base.act(times[k], xbar);
      F[k] = f.evaluate(times[k], xbar);
    }
  });
  for (std::size_t k = 0; k < N; ++k) {
    double a = std::fabs(F[k]);
    if (!std::isfinite(a)) throw InconclusiveError("non-finite Birkhoff sum");
    res.overall_max = std::max(res.overall_max, a);
    if (k < N / 16) res.early_max = res.overall_max;
  }
  if (res.overall_max > 4.0 * res.early_max + 1.0) {
    res.coboundary = false;
    res.witness = find_witness(f, base, xbar, times, xs, opt.h);
    return res;
  }
  // The orbit closure of (x bar, 0) is the graph of b - b(x bar): every bin
  // must see consistent values.
  std::vector<double> lo(bins, std::numeric_limits<double>::infinity());
  std::vector<double> hi(bins, -std::numeric_limits<double>::infinity());
  std::vector<double> value(bins, 0.0), gap(bins, std::numeric_limits<double>::infinity());
  TransferTable shape(d, n, std::vector<double>(bins, 0.0), TorusPoint(d));
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t b = node_index(xs[k], n);
    lo[b] = std::min(lo[b], F[k]);
    hi[b] = std::max(hi[b], F[k]);
    double g = node_gap(xs[k], shape.node(b));
    if (g < gap[b]) {
      gap[b] = g;
      value[b] = F[k];
    }
  }
  for (std::size_t b = 0; b < bins; ++b) {
    if (!std::isfinite(lo[b])) {
      std::ostringstream msg;
      msg << "bin " << b << " was never visited; increase N";
      throw InconclusiveError(msg.str());
    }
    if (hi[b] - lo[b] > res.tolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "bin " << b << " holds values " << lo[b] << " and " << hi[b]
          << " although the sums stay bounded";
      throw InconclusiveError(msg.str());
    }
  }
  res.coboundary = true;
  res.table = TransferTable(d, n, std::move(value), xbar);
  const Time unit = base.discrete() ? Time{std::int64_t{1}} : Time{step};
  for (std::size_t b = 0; b < bins; ++b) {
    TorusPoint x = res.table.node(b);
    double r = f.evaluate(unit, x) - res.table(base.act(unit, x)) + res.table(x);
    res.residual = std::max(res.residual, std::fabs(r));
  }
  return res;
}

}  // namespace skewlab
