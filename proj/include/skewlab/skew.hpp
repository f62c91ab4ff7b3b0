#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "skewlab/cocycle.hpp"

namespace skewlab {

struct RokhlinFiber {
  BaseSystem flow;  // linear flow phi on M
  // g(t, m), a flow generator over `flow` with sum |amplitude| <= 1/4.
  std::optional<CocycleSpec> perturbation;
};

struct SkewPoint {
  TorusPoint x;
  std::optional<TorusPoint> m;
  double a = 0.0;
};

// tau~(x, a) = (tau x, f(tau, x) + a). With a Rokhlin fiber the phase space
// is X x M and the point moves by (tau x, phi^{f} m, a + f + g(f, m)).
class SkewSystem {
 public:
  SkewSystem() = default;
  // Throws UsageError when the perturbation is not a drift-free flow
  // generator over the fiber flow with sum |amplitude| <= 1/4.
  explicit SkewSystem(CocyclePtr cocycle,
                      std::optional<RokhlinFiber> rokhlin = std::nullopt);

  const BaseSystem& base() const { return cocycle_->base(); }
  const Cocycle& cocycle() const { return *cocycle_; }
  const CocyclePtr& cocycle_ptr() const { return cocycle_; }
  bool discrete() const { return base().discrete(); }
  bool has_fiber() const { return rokhlin_.has_value(); }
  const std::optional<RokhlinFiber>& rokhlin() const { return rokhlin_; }
  const BaseSystem& fiber_flow() const;
  const TrigCocycle* perturbation() const { return g_.get(); }
  // sum |amplitude| of g, 0 without a perturbation.
  double perturbation_certificate() const;
  // dim X + dim M.
  std::size_t phase_dim() const;

  // The R-coordinate increment for base value F at fiber point m.
  double fiber_increment(double F, const TorusPoint* m) const;
  void check_point(const SkewPoint& p) const;

 private:
  CocyclePtr cocycle_;
  std::optional<RokhlinFiber> rokhlin_;
  std::shared_ptr<const TrigCocycle> g_;
};

SkewPoint skew_act(const SkewSystem& sys, const Time& t, const SkewPoint& p);
// R_b(x, a) = (x, a - b).
SkewPoint translate(const SkewPoint& p, double b);
// Distance of the X x M parts.
double phase_distance(const SkewPoint& p, const SkewPoint& q);
// Concatenated X x M coordinates.
TorusPoint phase_point(const SkewPoint& p);

// Points at the scheduled times, in schedule order. Integer schedules are
// walked incrementally with compensated summation; real schedules use the
// closed form at each time.
std::vector<SkewPoint> orbit(const SkewSystem& sys, const SkewPoint& start,
                             std::span<const Time> schedule);

// CSV columns: time, x1..xd, m1..me, a.
void write_orbit_csv(std::ostream& os, std::span<const Time> schedule,
                     std::span<const SkewPoint> points);

// Incremental Z orbit. Moving backward uses f(-1, x) = -f(1, T^{-1} x).
class OrbitWalker {
 public:
  OrbitWalker(const SkewSystem& sys, const SkewPoint& start);

  std::int64_t time() const { return n_; }
  const TorusPoint& x() const { return x_; }
  double cocycle_sum() const { return sum_ + comp_; }
  void forward();
  void backward();
  SkewPoint point() const;

 private:
  void add(double v);

  const SkewSystem* sys_;
  SkewPoint start_;
  TorusPoint x_;
  std::int64_t n_ = 0;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace skewlab
