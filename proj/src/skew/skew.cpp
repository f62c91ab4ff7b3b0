#include "skewlab/skew.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "skewlab/errors.hpp"

namespace skewlab {

SkewSystem::SkewSystem(CocyclePtr cocycle, std::optional<RokhlinFiber> rokhlin)
    : cocycle_(std::move(cocycle)), rokhlin_(std::move(rokhlin)) {
  if (!cocycle_) throw UsageError("skew system needs a cocycle");
  if (!rokhlin_) return;
  const BaseSystem& flow = rokhlin_->flow;
  if (flow.discrete() || flow.dim() == 0)
    throw UsageError("Rokhlin fiber needs a linear flow");
  if (!rokhlin_->perturbation) return;
  const CocycleSpec& g = *rokhlin_->perturbation;
  if (g.mode != CocycleMode::FlowGenerator || g.base.discrete())
    throw UsageError("perturbation must be a flow generator");
  if (g.base.direction() != flow.direction())
    throw UsageError("perturbation is not defined over the fiber flow");
  if (g.drift != 0.0) throw UsageError("perturbation must have no drift");
  g_ = make_cocycle(g);
  if (!(g_->amplitude_sum() <= kPerturbationBound))
    throw UsageError("perturbation certificate fails: sum |amplitude| = " +
                     std::to_string(g_->amplitude_sum()) + " > 1/4");
}

const BaseSystem& SkewSystem::fiber_flow() const {
  if (!rokhlin_) throw UsageError("system has no Rokhlin fiber");
  return rokhlin_->flow;
}

double SkewSystem::perturbation_certificate() const {
  return g_ ? g_->amplitude_sum() : 0.0;
}

std::size_t SkewSystem::phase_dim() const {
  return base().dim() + (rokhlin_ ? rokhlin_->flow.dim() : 0);
}

double SkewSystem::fiber_increment(double F, const TorusPoint* m) const {
  if (!g_) return F;
  return F + g_->evaluate(Time{F}, *m);
}

void SkewSystem::check_point(const SkewPoint& p) const {
  base().check_point(p.x);
  if (rokhlin_) {
    if (!p.m) throw UsageError("point lacks the fiber coordinate m");
    rokhlin_->flow.check_point(*p.m);
  } else if (p.m) {
    throw UsageError("point has a fiber coordinate but the system has none");
  }
  if (!std::isfinite(p.a)) throw UsageError("non-finite R coordinate");
}

SkewPoint skew_act(const SkewSystem& sys, const Time& t, const SkewPoint& p) {
  sys.check_point(p);
  double F = sys.cocycle().evaluate(t, p.x);
  SkewPoint q;
  q.x = sys.base().act(t, p.x);
  if (sys.has_fiber()) {
    q.m = sys.fiber_flow().act(F, *p.m);
    q.a = p.a + sys.fiber_increment(F, &*p.m);
  } else {
    q.a = p.a + F;
  }
  return q;
}

SkewPoint translate(const SkewPoint& p, double b) {
  SkewPoint q = p;
  q.a = p.a - b;
  return q;
}

TorusPoint phase_point(const SkewPoint& p) {
  std::size_t d = p.x.dim() + (p.m ? p.m->dim() : 0);
  if (d > kMaxTorusDim)
    throw UsageError("phase space dimension exceeds " +
                     std::to_string(kMaxTorusDim));
  TorusPoint out(d);
  for (std::size_t i = 0; i < p.x.dim(); ++i) out[i] = p.x[i];
  if (p.m)
    for (std::size_t i = 0; i < p.m->dim(); ++i) out[p.x.dim() + i] = (*p.m)[i];
  return out;
}

double phase_distance(const SkewPoint& p, const SkewPoint& q) {
  double d = distance(p.x, q.x);
  if (p.m.has_value() != q.m.has_value())
    throw UsageError("phase distance: fiber mismatch");
  if (p.m) d = std::max(d, distance(*p.m, *q.m));
  return d;
}

OrbitWalker::OrbitWalker(const SkewSystem& sys, const SkewPoint& start)
    : sys_(&sys), start_(start), x_(start.x) {
  if (!sys.discrete()) throw UsageError("orbit walker needs a Z action");
  sys.check_point(start);
}

void OrbitWalker::add(double v) {
  // Kahan-Babuska summation.
  double t = sum_ + v;
  if (std::fabs(sum_) >= std::fabs(v))
    comp_ += (sum_ - t) + v;
  else
    comp_ += (v - t) + sum_;
  sum_ = t;
}

void OrbitWalker::forward() {
  add(sys_->cocycle().generator(x_));
  const auto& alpha = sys_->base().rotation_vector();
  for (std::size_t i = 0; i < x_.dim(); ++i) x_[i] += alpha[i];
  ++n_;
}

void OrbitWalker::backward() {
  const auto& alpha = sys_->base().rotation_vector();
  for (std::size_t i = 0; i < x_.dim(); ++i) x_[i] -= alpha[i];
  add(-sys_->cocycle().generator(x_));
  --n_;
}

SkewPoint OrbitWalker::point() const {
  double F = cocycle_sum();
  SkewPoint q;
  q.x = x_;
  if (sys_->has_fiber()) {
    q.m = sys_->fiber_flow().act(F, *start_.m);
    q.a = start_.a + sys_->fiber_increment(F, &*start_.m);
  } else {
    q.a = start_.a + F;
  }
  return q;
}

namespace {
constexpr std::int64_t kMaxWalk = 100'000'000;
}

std::vector<SkewPoint> orbit(const SkewSystem& sys, const SkewPoint& start,
                             std::span<const Time> schedule) {
  sys.check_point(start);
  for (const Time& t : schedule) sys.base().check_time(t);
  std::vector<SkewPoint> out(schedule.size());
  if (!sys.discrete()) {
    for (std::size_t i = 0; i < schedule.size(); ++i)
      out[i] = skew_act(sys, schedule[i], start);
    return out;
  }
  std::vector<std::size_t> pos, neg;
  std::int64_t reach_pos = 0, reach_neg = 0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    std::int64_t n = std::get<std::int64_t>(schedule[i]);
    if (n >= 0) {
      pos.push_back(i);
      reach_pos = std::max(reach_pos, n);
    } else {
      neg.push_back(i);
      reach_neg = std::max(reach_neg, -n);
    }
  }
  auto time_of = [&](std::size_t i) { return std::get<std::int64_t>(schedule[i]); };
  if (reach_pos > kMaxWalk || reach_neg > kMaxWalk) {
    for (std::size_t i = 0; i < schedule.size(); ++i)
      out[i] = skew_act(sys, schedule[i], start);
    return out;
  }
  std::sort(pos.begin(), pos.end(),
            [&](std::size_t a, std::size_t b) { return time_of(a) < time_of(b); });
  std::sort(neg.begin(), neg.end(),
            [&](std::size_t a, std::size_t b) { return time_of(a) > time_of(b); });
  OrbitWalker fw(sys, start);
  for (std::size_t i : pos) {
    while (fw.time() < time_of(i)) fw.forward();
    out[i] = fw.point();
  }
  OrbitWalker bw(sys, start);
  for (std::size_t i : neg) {
    while (bw.time() > time_of(i)) bw.backward();
    out[i] = bw.point();
  }
  return out;
}

void write_orbit_csv(std::ostream& os, std::span<const Time> schedule,
                     std::span<const SkewPoint> points) {
  if (schedule.size() != points.size())
    throw UsageError("orbit csv: schedule and points differ in length");
  os << "time";
  if (!points.empty()) {
    for (std::size_t i = 0; i < points[0].x.dim(); ++i) os << ",x" << i + 1;
    if (points[0].m)
      for (std::size_t i = 0; i < points[0].m->dim(); ++i) os << ",m" << i + 1;
  }
  os << ",a\n";
  auto old = os.precision(17);
  for (std::size_t k = 0; k < points.size(); ++k) {
    os << describe(schedule[k]);
    for (double c : points[k].x.to_doubles()) os << ',' << c;
    if (points[k].m)
      for (double c : points[k].m->to_doubles()) os << ',' << c;
    os << ',' << points[k].a << '\n';
  }
  os.precision(old);
}

}  // namespace skewlab
