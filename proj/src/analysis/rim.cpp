#include <cmath>

#include "skewlab/analysis.hpp"
#include "skewlab/errors.hpp"

namespace skewlab {

namespace {

std::vector<TorusPoint> fiber_grid(std::size_t dim, std::size_t n) {
  if (n == 0) throw UsageError("fiber grid needs at least one cell");
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    total *= n;
    if (total > (std::size_t{1} << 24)) throw UsageError("fiber grid too large");
  }
  std::vector<TorusPoint> out;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    TorusPoint m(dim);
    std::size_t rest = idx;
    for (std::size_t i = 0; i < dim; ++i) {
      m[i] = Turn::from_double(static_cast<double>(rest % n) / static_cast<double>(n));
      rest /= n;
    }
    out.push_back(m);
  }
  return out;
}

TorusPoint join(const TorusPoint& x, const TorusPoint& m) {
  TorusPoint p(x.dim() + m.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) p[i] = x[i];
  for (std::size_t i = 0; i < m.dim(); ++i) p[x.dim() + i] = m[i];
  return p;
}

}  // namespace

RimProjection::RimProjection(const SkewSystem& sys, std::size_t fiber_cells)
    : base_(sys.base()) {
  if (!sys.has_fiber())
    throw UnsupportedError("RIM projection needs a product system; this one has no fiber");
  sys_ = sys;
  nodes_ = fiber_grid(sys.fiber_flow().dim(), fiber_cells);
}

RimProjection::RimProjection(std::shared_ptr<const TrigCocycle> f, std::size_t split,
                             std::size_t fiber_cells)
    : product_(std::move(f)), split_(split) {
  if (!product_) throw UsageError("RIM projection of a null cocycle");
  const BaseSystem& b = product_->base();
  if (split == 0 || split >= b.dim())
    throw UnsupportedError("split index must leave both factors non-empty");
  if (b.discrete()) {
    std::vector<Turn> alpha(b.rotation_vector().begin(),
                            b.rotation_vector().begin() + static_cast<std::ptrdiff_t>(split));
    base_ = BaseSystem::rotation(std::move(alpha), b.provenance() + " (first factor)");
  } else {
    std::vector<long double> v(b.direction().begin(),
                               b.direction().begin() + static_cast<std::ptrdiff_t>(split));
    base_ = BaseSystem::linear_flow(std::move(v), b.provenance() + " (first factor)");
  }
  nodes_ = fiber_grid(b.dim() - split, fiber_cells);
}

double RimProjection::evaluate(const Time& t, const TorusPoint& x) const {
  base_.check_time(t);
  base_.check_point(x);
  long double acc = 0;
  if (sys_) {
    const double F = sys_->cocycle().evaluate(t, x);
    // Without a perturbation the increment does not depend on m.
    if (!sys_->perturbation()) return F;
    for (const TorusPoint& m : nodes_) acc += sys_->fiber_increment(F, &m);
  } else {
    for (const TorusPoint& m : nodes_) acc += product_->evaluate(t, join(x, m));
  }
  return static_cast<double>(acc / static_cast<long double>(nodes_.size()));
}

double RimProjection::generator(const TorusPoint& x) const {
  if (base_.discrete()) return evaluate(Time{std::int64_t{1}}, x);
  long double acc = 0;
  if (sys_) {
    const double A = sys_->cocycle().generator(x);
    const TrigCocycle* g = sys_->perturbation();
    if (!g) return A;
    // d/dt g(F(t), m) at t = 0 is A_g(m) A_f(x).
    for (const TorusPoint& m : nodes_) acc += A * (1.0 + g->generator(m));
  } else {
    for (const TorusPoint& m : nodes_) acc += product_->generator(join(x, m));
  }
  return static_cast<double>(acc / static_cast<long double>(nodes_.size()));
}

}  // namespace skewlab
