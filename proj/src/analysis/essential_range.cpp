#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>

#include "scan.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/parallel.hpp"

namespace skewlab {

bool EssentialRangeReport::has(double value) const {
  const double tol = options.delta / 2.0;
  return std::any_of(candidates.begin(), candidates.end(),
                     [&](const Candidate& c) { return std::fabs(c.value - value) <= tol; });
}

bool EssentialRangeReport::symmetric() const {
  const double tol = options.delta * (1.0 + 1e-9);
  for (const Candidate& c : candidates) {
    bool mirrored = std::any_of(candidates.begin(), candidates.end(), [&](const Candidate& d) {
      return std::fabs(d.value + c.value) <= tol;
    });
    if (!mirrored) return false;
  }
  return true;
}

bool same_range(const EssentialRangeReport& a, const EssentialRangeReport& b) {
  auto covered = [](const EssentialRangeReport& x, const EssentialRangeReport& y) {
    const double tol = std::max(x.options.delta, y.options.delta) * (1.0 + 1e-9);
    for (const Candidate& c : x.candidates) {
      bool near = std::any_of(y.candidates.begin(), y.candidates.end(),
                              [&](const Candidate& d) { return std::fabs(d.value - c.value) <= tol; });
      if (!near) return false;
    }
    return true;
  };
  return covered(a, b) && covered(b, a);
}

EssentialRangeReport estimate_essential_range(const SkewSystem& sys,
                                              const RangeOptions& opt) {
  if (!(opt.window > 0.0) || !(opt.delta > 0.0) || !(opt.eps > 0.0))
    throw UsageError("essential range needs W, delta, eps > 0");
  if (opt.window / opt.delta > 1e6) throw UsageError("window too fine for the resolution");
  detail::LagPlan plan = detail::plan_scan(sys, opt.eps, opt.budget, opt.lag_limit);
  EssentialRangeReport rep;
  rep.options = opt;
  rep.lags = plan.lags.size();
  rep.lag_limit = plan.schedule.limit;
  const auto K = static_cast<std::int64_t>(std::floor(opt.window / opt.delta + 1e-9));
  // Best witness per value bin, per lag; merged in lag order.
  std::vector<std::map<std::int64_t, Witness>> found(plan.lags.size());
  parallel_for(plan.lags.size(), [&](std::size_t i) {
    auto& mine = found[i];
    for (std::uint64_t j = 0; j < plan.points_per_lag; ++j) {
      SkewPoint p = detail::scan_point(sys, opt.seed, i, j, 0.0);
      Witness w = make_witness(sys, plan.lags[i], p);
      if (!(w.displacement < opt.eps)) continue;
      auto k = static_cast<std::int64_t>(std::llround(w.increment / opt.delta));
      if (std::llabs(k) > K) continue;
      double err = std::fabs(w.increment - static_cast<double>(k) * opt.delta);
      auto it = mine.find(k);
      if (it == mine.end() ||
          err < std::fabs(it->second.increment - static_cast<double>(k) * opt.delta))
        mine[k] = w;
    }
  });
  std::map<std::int64_t, Witness> best;
  for (auto& m : found)
    for (auto& [k, w] : m) {
      double err = std::fabs(w.increment - static_cast<double>(k) * opt.delta);
      auto it = best.find(k);
      if (it == best.end() ||
          err < std::fabs(it->second.increment - static_cast<double>(k) * opt.delta))
        best[k] = w;
    }
  for (auto& [k, w] : best) rep.candidates.push_back({static_cast<double>(k) * opt.delta, w});
  rep.budget_used = plan.points_per_lag * plan.lags.size();
  return rep;
}

GapScanResult gap_scan(const SkewSystem& sys, const GapOptions& opt) {
  if (!(opt.kappa > 0.0)) throw UsageError("gap scan needs kappa > 0");
  if (!(opt.eps > 0.0)) throw UsageError("gap scan needs eps > 0");
  detail::LagPlan plan = detail::plan_scan(sys, opt.eps, opt.budget, opt.lag_limit);
  GapScanResult res;
  res.options = opt;
  // First violating lag in schedule order wins, so the result does not
  // depend on scheduling.
  std::atomic<std::size_t> first{plan.lags.size()};
  std::vector<std::optional<Witness>> hit(plan.lags.size());
  std::vector<std::uint64_t> used(plan.lags.size(), 0);
  parallel_for(plan.lags.size(), [&](std::size_t i) {
    if (i > first.load()) return;
    for (std::uint64_t j = 0; j < plan.points_per_lag; ++j) {
      SkewPoint p = detail::scan_point(sys, opt.seed, i, j, 0.0);
      Witness w = make_witness(sys, plan.lags[i], p);
      ++used[i];
      if (!(w.displacement < opt.eps)) continue;
      double v = std::fabs(w.increment);
      if (v > opt.kappa && v <= 2.0 * opt.kappa) {
        hit[i] = w;
        std::size_t cur = first.load();
        while (i < cur && !first.compare_exchange_weak(cur, i)) {
        }
        return;
      }
    }
  });
  for (std::size_t i = 0; i < plan.lags.size(); ++i) {
    res.budget_used += used[i];
    if (hit[i]) {
      res.clean = false;
      res.violation = hit[i];
      break;
    }
  }
  return res;
}

}  // namespace skewlab
