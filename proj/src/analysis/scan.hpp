#pragma once

#include <cstdint>
#include <vector>

#include "skewlab/analysis.hpp"
#include "skewlab/rng.hpp"

namespace skewlab::detail {

std::int64_t default_lag_limit(const BaseSystem& base);
Time negate(const Time& t);
double magnitude(const Time& t);

// Signed lags for a witness scan: +tau_0, -tau_0, +tau_1, ... and the number
// of phase points to try per lag so the total stays within the budget.
struct LagPlan {
  LagSchedule schedule;
  std::vector<Time> lags;
  std::uint64_t points_per_lag = 0;
};

LagPlan plan_scan(const SkewSystem& sys, double eps, std::uint64_t budget,
                  std::int64_t lag_limit);

// Phase point number j of lag i.
SkewPoint scan_point(const SkewSystem& sys, std::uint64_t seed, std::size_t lag,
                     std::uint64_t j, double a);

}  // namespace skewlab::detail
