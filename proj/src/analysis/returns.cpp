#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include "scan.hpp"
#include "skewlab/errors.hpp"

namespace skewlab {

namespace {

constexpr std::size_t kBuckets = 64;

// Walks tau = k * step for k = 1..limit and calls fn(k, displacement) at
// every return below eps.
template <class Fn>
void walk_returns(const BaseSystem& base, double eps, std::int64_t limit, Fn&& fn) {
  const std::size_t d = base.dim();
  std::array<Turn, kMaxTorusDim> inc{}, cur{};
  if (base.discrete()) {
    for (std::size_t i = 0; i < d; ++i) inc[i] = base.rotation_vector()[i];
  } else {
    long double vmax = 0;
    for (long double v : base.direction()) vmax = std::max(vmax, std::fabs(v));
    const long double step = static_cast<long double>(eps) / (4.0L * vmax);
    for (std::size_t i = 0; i < d; ++i) inc[i] = Turn::from_long_double(step * base.direction()[i]);
  }
  const std::uint64_t bound = Turn::from_double(eps).raw();
  for (std::int64_t k = 1; k <= limit; ++k) {
    std::uint64_t worst = 0;
    for (std::size_t i = 0; i < d; ++i) {
      cur[i] += inc[i];
      std::uint64_t r = cur[i].raw();
      worst = std::max(worst, std::min(r, ~r + 1));
    }
    if (worst < bound) fn(k, static_cast<double>(worst) * 0x1p-64);
  }
}

}  // namespace

LagSchedule return_lags(const BaseSystem& base, double eps, std::int64_t limit,
                        std::size_t count) {
  if (!(eps > 0.0) || eps >= 0.5) throw UsageError("return tolerance must be in (0, 1/2)");
  if (limit < 1) throw UsageError("lag limit must be >= 1");
  LagSchedule out;
  out.limit = limit;
  if (!base.discrete()) {
    long double vmax = 0;
    for (long double v : base.direction()) vmax = std::max(vmax, std::fabs(v));
    out.step = static_cast<double>(static_cast<long double>(eps) / (4.0L * vmax));
  }
  std::array<std::uint64_t, kBuckets> found{};
  walk_returns(base, eps, limit, [&](std::int64_t k, double) {
    ++found[std::bit_width(static_cast<std::uint64_t>(k)) - 1];
  });
  for (auto n : found) out.returns_found += n;
  // Even share per dyadic scale; small scales hand their leftover on.
  std::array<std::uint64_t, kBuckets> quota{};
  std::vector<std::size_t> order;
  for (std::size_t b = 0; b < kBuckets; ++b)
    if (found[b]) order.push_back(b);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return found[a] < found[b]; });
  std::uint64_t left = count;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::uint64_t share = left / (order.size() - i);
    quota[order[i]] = std::min(share, found[order[i]]);
    left -= quota[order[i]];
  }
  std::array<std::uint64_t, kBuckets> seen{}, taken{};
  walk_returns(base, eps, limit, [&](std::int64_t k, double disp) {
    std::size_t b = static_cast<std::size_t>(std::bit_width(static_cast<std::uint64_t>(k)) - 1);
    std::uint64_t i = seen[b]++;
    if (taken[b] >= quota[b]) return;
    // Take index i when it is the next evenly spaced pick of this bucket.
    std::uint64_t want = (2 * taken[b] + 1) * found[b] / (2 * quota[b]);
    if (i != want) return;
    ++taken[b];
    out.lags.push_back(base.discrete() ? Time{k} : Time{static_cast<double>(k) * out.step});
    out.displacement.push_back(disp);
  });
  return out;
}

Witness make_witness(const SkewSystem& sys, const Time& tau, const SkewPoint& p) {
  SkewPoint q = skew_act(sys, tau, p);
  Witness w;
  w.tau = tau;
  w.p = p;
  w.increment = q.a - p.a;
  w.displacement = phase_distance(p, q);
  return w;
}

SkewPoint random_phase_point(const SkewSystem& sys, std::uint64_t seed, double a) {
  Rng rng(seed);
  SkewPoint p;
  p.x = TorusPoint(sys.base().dim());
  for (std::size_t i = 0; i < p.x.dim(); ++i) p.x[i] = Turn(rng.next());
  if (sys.has_fiber()) {
    p.m = TorusPoint(sys.fiber_flow().dim());
    for (std::size_t i = 0; i < p.m->dim(); ++i) (*p.m)[i] = Turn(rng.next());
  }
  p.a = a;
  return p;
}

namespace detail {

std::int64_t default_lag_limit(const BaseSystem& base) {
  return base.discrete() ? std::int64_t{1} << 26 : std::int64_t{1} << 24;
}

Time negate(const Time& t) {
  if (is_discrete(t)) return Time{-std::get<std::int64_t>(t)};
  return Time{-std::get<double>(t)};
}

double magnitude(const Time& t) {
  if (is_discrete(t)) return std::fabs(static_cast<double>(std::get<std::int64_t>(t)));
  return std::fabs(std::get<double>(t));
}

LagPlan plan_scan(const SkewSystem& sys, double eps, std::uint64_t budget,
                  std::int64_t lag_limit) {
  if (budget < 2) throw UsageError("scan budget must be >= 2");
  if (lag_limit == 0) lag_limit = default_lag_limit(sys.base());
  const auto want = static_cast<std::size_t>(
      std::clamp(std::sqrt(static_cast<double>(budget) / 2.0), 8.0, 2048.0));
  LagPlan plan;
  plan.schedule = return_lags(sys.base(), eps, lag_limit, want);
  for (const Time& t : plan.schedule.lags) {
    plan.lags.push_back(t);
    plan.lags.push_back(negate(t));
  }
  if (!plan.lags.empty())
    plan.points_per_lag = std::max<std::uint64_t>(1, budget / plan.lags.size());
  return plan;
}

SkewPoint scan_point(const SkewSystem& sys, std::uint64_t seed, std::size_t lag,
                     std::uint64_t j, double a) {
  return random_phase_point(sys, Rng(seed).split(lag).split(j).next(), a);
}

}  // namespace detail

}  // namespace skewlab
