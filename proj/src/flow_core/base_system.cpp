#include "skewlab/base_system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skewlab/errors.hpp"

namespace skewlab {

bool is_discrete(const Time& t) {
  return std::holds_alternative<std::int64_t>(t);
}

std::string describe(const Time& t) {
  std::ostringstream os;
  if (is_discrete(t)) {
    os << std::get<std::int64_t>(t);
  } else {
    os.precision(17);
    os << std::get<double>(t);
  }
  return os.str();
}

BaseSystem BaseSystem::rotation(std::vector<Turn> alpha,
                                std::string provenance,
                                std::vector<Convergent> convergents) {
  if (alpha.empty() || alpha.size() > kMaxTorusDim)
    throw UsageError("rotation vector dimension must be in 1..4");
  BaseSystem b;
  b.kind_ = BaseKind::DiscreteRotation;
  b.dim_ = alpha.size();
  b.alpha_ = std::move(alpha);
  b.provenance_ = std::move(provenance);
  b.convergents_ = std::move(convergents);
  return b;
}

BaseSystem BaseSystem::linear_flow(std::vector<long double> direction,
                                   std::string provenance,
                                   std::vector<Convergent> convergents) {
  if (direction.empty() || direction.size() > kMaxTorusDim)
    throw UsageError("flow direction dimension must be in 1..4");
  for (long double v : direction)
    if (!std::isfinite(v)) throw UsageError("non-finite flow direction");
  if (!convergents.empty() && (direction.size() != 2 || direction[0] != 1.0L))
    throw UsageError("flow convergents need a direction of the form (1, beta)");
  BaseSystem b;
  b.kind_ = BaseKind::LinearFlow;
  b.dim_ = direction.size();
  b.direction_ = std::move(direction);
  b.provenance_ = std::move(provenance);
  b.convergents_ = std::move(convergents);
  return b;
}

void BaseSystem::check_time(const Time& t) const {
  if (discrete() != is_discrete(t))
    throw UsageError(std::string("time type mismatch: ") +
                     (discrete() ? "rotation needs an integer time"
                                 : "flow needs a real time"));
  if (!discrete() && !std::isfinite(std::get<double>(t)))
    throw UsageError("non-finite flow time");
}

void BaseSystem::check_point(const TorusPoint& x) const {
  if (x.dim() != dim_)
    throw UsageError("point dimension " + std::to_string(x.dim()) +
                     " does not match base dimension " + std::to_string(dim_));
}

TorusPoint BaseSystem::act(std::int64_t n, const TorusPoint& x) const {
  check_time(Time{n});
  check_point(x);
  TorusPoint y = x;
  for (std::size_t i = 0; i < dim_; ++i) y[i] += alpha_[i].times(n);
  return y;
}

TorusPoint BaseSystem::act(double t, const TorusPoint& x) const {
  check_time(Time{t});
  check_point(x);
  TorusPoint y = x;
  for (std::size_t i = 0; i < dim_; ++i)
    y[i] += Turn::from_long_double(static_cast<long double>(t) * direction_[i]);
  return y;
}

TorusPoint BaseSystem::act(const Time& t, const TorusPoint& x) const {
  if (is_discrete(t)) return act(std::get<std::int64_t>(t), x);
  return act(std::get<double>(t), x);
}

TorusPoint BaseSystem::displacement(const Time& t) const {
  return act(t, TorusPoint(dim_));
}

std::vector<Convergent> turn_convergents(Turn alpha, std::int64_t max_q) {
  // Euclid on (raw, 2^64) with 128-bit arithmetic.
  using u128 = unsigned __int128;
  std::vector<Convergent> out;
  u128 num = alpha.raw();
  u128 den = static_cast<u128>(1) << 64;
  // alpha = num/den with a0 = 0 since num < den.
  __int128 p_prev = 1, q_prev = 0;  // p_{-1}, q_{-1}
  __int128 p = 0, q = 1;            // p_0, q_0
  out.push_back({0, 1});
  while (num != 0) {
    u128 a = den / num;
    u128 r = den % num;
    den = num;
    num = r;
    __int128 pn = static_cast<__int128>(a) * p + p_prev;
    __int128 qn = static_cast<__int128>(a) * q + q_prev;
    if (qn > max_q) break;
    p_prev = p;
    q_prev = q;
    p = pn;
    q = qn;
    out.push_back({static_cast<std::int64_t>(p), static_cast<std::int64_t>(q)});
  }
  return out;
}

std::vector<Convergent> real_convergents(long double x, std::int64_t max_q) {
  if (!(x > 0) || !std::isfinite(x)) throw UsageError("convergents need x > 0");
  std::vector<Convergent> out;
  long double a0 = std::floor(x);
  long double frac = x - a0;
  std::int64_t p_prev = 1, q_prev = 0;
  std::int64_t p = static_cast<std::int64_t>(a0), q = 1;
  out.push_back({p, q});
  // long double keeps ~19 digits, enough for q up to ~1e9.
  while (frac > 1e-18L) {
    long double inv = 1.0L / frac;
    long double a = std::floor(inv);
    frac = inv - a;
    std::int64_t ai = static_cast<std::int64_t>(a);
    std::int64_t qn = ai * q + q_prev;
    if (qn > max_q || qn <= 0) break;
    std::int64_t pn = ai * p + p_prev;
    p_prev = p;
    q_prev = q;
    p = pn;
    q = qn;
    out.push_back({p, q});
  }
  return out;
}

double covering_radius_1d(std::vector<Turn> pts) {
  if (pts.empty()) return 0.5;
  std::sort(pts.begin(), pts.end(),
            [](Turn a, Turn b) { return a.raw() < b.raw(); });
  std::uint64_t gap = pts.front().raw() - pts.back().raw();  // wraps
  for (std::size_t i = 1; i < pts.size(); ++i)
    gap = std::max(gap, pts[i].raw() - pts[i - 1].raw());
  if (pts.size() == 1) return 0.5;
  return static_cast<double>(gap) * 0x1p-64 * 0.5;
}

}  // namespace skewlab
