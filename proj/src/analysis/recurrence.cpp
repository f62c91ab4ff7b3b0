#include <algorithm>
#include <cmath>

#include "scan.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/parallel.hpp"

namespace skewlab {

const char* to_string(Recurrence r) {
  switch (r) {
    case Recurrence::Recurrent: return "Recurrent";
    case Recurrence::Transient: return "Transient";
    case Recurrence::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

constexpr int kEscapeBlocks = 5;

ScaleWitnesses scan_scale(const SkewSystem& sys, double eps, std::uint64_t budget,
                          std::int64_t limit, std::uint64_t seed, double a0,
                          std::uint64_t* used) {
  detail::LagPlan plan = detail::plan_scan(sys, eps, budget, limit);
  ScaleWitnesses out;
  out.eps = eps;
  out.large_lag_steps = plan.schedule.limit / 16;
  const double large = static_cast<double>(out.large_lag_steps) * plan.schedule.step;
  std::vector<std::optional<Witness>> pos(plan.lags.size()), neg(plan.lags.size());
  std::vector<std::uint64_t> count(plan.lags.size(), 0);
  parallel_for(plan.lags.size(), [&](std::size_t i) {
    const Time& tau = plan.lags[i];
    const bool positive = detail::magnitude(tau) > 0 &&
                          (is_discrete(tau) ? std::get<std::int64_t>(tau) > 0 : std::get<double>(tau) > 0);
    for (std::uint64_t j = 0; j < plan.points_per_lag; ++j) {
      SkewPoint p = detail::scan_point(sys, seed, i, j, a0);
      Witness w = make_witness(sys, tau, p);
      if (!(w.displacement < eps) || !(std::fabs(w.increment) < eps)) continue;
      ++count[i];
      if (detail::magnitude(tau) < large) continue;
      auto& slot = positive ? pos[i] : neg[i];
      if (!slot) slot = w;
    }
  });
  auto pick = [](std::optional<Witness>& best, const std::optional<Witness>& w) {
    if (w && (!best || detail::magnitude(w->tau) > detail::magnitude(best->tau))) best = w;
  };
  for (std::size_t i = 0; i < plan.lags.size(); ++i) {
    out.count += count[i];
    pick(out.positive, pos[i]);
    pick(out.negative, neg[i]);
  }
  *used += plan.points_per_lag * plan.lags.size();
  return out;
}

EscapeProfile escape(const SkewSystem& sys, const SkewPoint& p, int direction,
                     std::size_t samples, const RecurrenceOptions& opt, Rng rng,
                     std::uint64_t* used) {
  EscapeProfile prof;
  prof.direction = direction;
  const int blocks = sys.discrete() ? 24 : 14;
  for (int j = 0; j < blocks; ++j) {
    const double lo = std::ldexp(1.0, j), width = lo;
    double best = std::numeric_limits<double>::infinity();
    if (sys.discrete()) {
      const auto n0 = static_cast<std::int64_t>(lo), size = n0;
      const auto m = static_cast<std::int64_t>(std::min<std::size_t>(samples, static_cast<std::size_t>(size)));
      const std::int64_t offset = size > m ? rng.integer(0, size / m - 1) : 0;
      for (std::int64_t k = 0; k < m; ++k) {
        std::int64_t n = n0 + k * (size / m) + offset;
        best = std::min(best, std::fabs(skew_act(sys, Time{direction * n}, p).a));
      }
      *used += static_cast<std::uint64_t>(m);
    } else {
      for (std::size_t k = 0; k < samples; ++k) {
        double t = lo + width * (static_cast<double>(k) + rng.uniform()) / static_cast<double>(samples);
        best = std::min(best, std::fabs(skew_act(sys, Time{direction * t}, p).a));
      }
      *used += samples;
    }
    prof.block_start.push_back(lo);
    prof.block_min.push_back(best);
  }
  const auto& m = prof.block_min;
  prof.escapes = m.back() > opt.escape_threshold;
  for (std::size_t j = m.size() - kEscapeBlocks; j < m.size() && prof.escapes; ++j)
    if (!(m[j] >= m[j - 1] + opt.margin)) prof.escapes = false;
  return prof;
}

}  // namespace

RecurrenceVerdict classify_recurrence(const SkewSystem& sys,
                                      const RecurrenceOptions& opt) {
  if (opt.budget < 1000) throw UsageError("recurrence budget must be >= 1000");
  if (opt.scales.empty()) throw UsageError("recurrence needs at least one scale");
  for (double e : opt.scales)
    if (!(e > 0.0) || e >= 0.5) throw UsageError("recurrence scales must be in (0, 1/2)");
  if (opt.starts == 0) throw UsageError("recurrence needs at least one start");
  RecurrenceVerdict out;
  const std::size_t n = opt.scales.size();
  const std::uint64_t scan_budget = opt.budget - opt.budget / 4;
  // Later (finer) scales get geometrically larger budgets and lag ranges.
  double total_weight = 0;
  for (std::size_t i = 0; i < n; ++i) total_weight += std::ldexp(1.0, static_cast<int>(i));
  bool recurrent = true;
  for (std::size_t i = 0; i < n; ++i) {
    auto share = static_cast<std::uint64_t>(static_cast<double>(scan_budget) *
                                            std::ldexp(1.0, static_cast<int>(i)) / total_weight);
    std::int64_t limit = detail::default_lag_limit(sys.base()) >> (2 * (n - 1 - i));
    limit = std::max<std::int64_t>(limit, 1024);
    ScaleWitnesses s = scan_scale(sys, opt.scales[i], std::max<std::uint64_t>(share, 16), limit,
                                  Rng(opt.seed).split(i).next(), opt.a0, &out.budget_used);
    recurrent = recurrent && s.positive && s.negative;
    out.scales.push_back(std::move(s));
  }
  if (recurrent) {
    out.verdict = Recurrence::Recurrent;
    return out;
  }
  const int blocks = sys.discrete() ? 24 : 14;
  const std::size_t samples = std::clamp<std::size_t>(
      static_cast<std::size_t>(opt.budget / 4 / (opt.starts * 2 * static_cast<std::size_t>(blocks))),
      8, 4096);
  bool all_escape = true;
  for (std::size_t s = 0; s < opt.starts; ++s) {
    SkewPoint p = random_phase_point(sys, Rng(opt.seed).split(1000 + s).next(), opt.a0);
    for (int dir : {1, -1}) {
      EscapeProfile prof = escape(sys, p, dir, samples, opt,
                                  Rng(opt.seed).split(2000 + 2 * s + (dir > 0 ? 0 : 1)),
                                  &out.budget_used);
      prof.start = s;
      all_escape = all_escape && prof.escapes;
      out.profile.push_back(std::move(prof));
    }
  }
  out.verdict = all_escape ? Recurrence::Transient : Recurrence::Inconclusive;
  return out;
}

}  // namespace skewlab
