#include "skewlab/cocycle.hpp"

#include <cmath>
#include <numbers>

#include "skewlab/errors.hpp"
#include "skewlab/rng.hpp"

namespace skewlab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

TrigCocycle::TrigCocycle(CocycleSpec spec) : spec_(std::move(spec)) {
  const BaseSystem& base = spec_.base;
  if (base.dim() == 0) throw UsageError("cocycle needs a base system");
  bool want_discrete = spec_.mode == CocycleMode::GeneratorFunction;
  if (want_discrete != base.discrete())
    throw UsageError(want_discrete
                         ? "generator-function cocycles need a rotation base"
                         : "flow-generator cocycles need a linear flow base");
  if (!std::isfinite(spec_.drift)) throw UsageError("non-finite drift");
  for (const TrigTerm& term : spec_.terms) {
    if (term.freq.size() != base.dim())
      throw UsageError("term frequency has dimension " +
                       std::to_string(term.freq.size()) + ", base has " +
                       std::to_string(base.dim()));
    bool zero = true;
    for (auto k : term.freq) zero = zero && k == 0;
    if (zero) throw UsageError("term frequency must be nonzero");
    if (!std::isfinite(term.amplitude) || !std::isfinite(term.phase))
      throw UsageError("non-finite term coefficient");
    Prepared p;
    p.phase = Turn::from_double(term.phase);
    if (base.discrete()) {
      p.psi = pairing(term.freq, TorusPoint::from_turns(base.rotation_vector()));
      double s = p.psi.to_signed();
      double h = std::sin(kPi * s);
      p.e1_re = -2.0 * h * h;
      p.e1_im = std::sin(kTwoPi * s);
    } else {
      long double kv = 0;
      for (std::size_t i = 0; i < base.dim(); ++i)
        kv += static_cast<long double>(term.freq[i]) * base.direction()[i];
      if (std::fabs(kv) < 1e-14L)
        throw UsageError("flow term with k.v = 0 has no closed-form integral");
      p.kv = kv;
    }
    prep_.push_back(p);
  }
}

double TrigCocycle::amplitude_sum() const {
  double s = 0.0;
  for (const auto& t : spec_.terms) s += std::fabs(t.amplitude);
  return s;
}

double TrigCocycle::generator(const TorusPoint& x) const {
  spec_.base.check_point(x);
  double s = spec_.drift;
  for (std::size_t i = 0; i < prep_.size(); ++i) {
    Turn theta = pairing(spec_.terms[i].freq, x) + prep_[i].phase;
    s += spec_.terms[i].amplitude * std::cos(kTwoPi * theta.to_double());
  }
  return s;
}

double TrigCocycle::evaluate(const Time& t, const TorusPoint& x) const {
  spec_.base.check_time(t);
  spec_.base.check_point(x);
  if (is_discrete(t)) return evaluate_discrete(std::get<std::int64_t>(t), x);
  return evaluate_flow(std::get<double>(t), x);
}

double TrigCocycle::evaluate_discrete(std::int64_t n, const TorusPoint& x) const {
  double s = spec_.drift * static_cast<double>(n);
  for (std::size_t i = 0; i < prep_.size(); ++i) {
    const Prepared& p = prep_[i];
    Turn theta = pairing(spec_.terms[i].freq, x) + p.phase;
    double c = std::cos(kTwoPi * theta.to_double());
    if (p.psi.raw() == 0) {
      s += spec_.terms[i].amplitude * static_cast<double>(n) * c;
      continue;
    }
    double sn = std::sin(kTwoPi * theta.to_double());
    // sum_{j<n} e^{2 pi i (theta + j psi)} = e^{2 pi i theta} E_n / E_1
    double u = p.psi.times(n).to_signed();
    double h = std::sin(kPi * u);
    double en_re = -2.0 * h * h;
    double en_im = std::sin(kTwoPi * u);
    double norm = p.e1_re * p.e1_re + p.e1_im * p.e1_im;
    double r_re = (en_re * p.e1_re + en_im * p.e1_im) / norm;
    double r_im = (en_im * p.e1_re - en_re * p.e1_im) / norm;
    s += spec_.terms[i].amplitude * (c * r_re - sn * r_im);
  }
  return s;
}

double TrigCocycle::evaluate_flow(double t, const TorusPoint& x) const {
  double s = spec_.drift * t;
  for (std::size_t i = 0; i < prep_.size(); ++i) {
    const Prepared& p = prep_[i];
    Turn theta = pairing(spec_.terms[i].freq, x) + p.phase;
    // sin(a + d) - sin(a) = 2 cos(a + d/2) sin(d/2), with d reduced first.
    Turn delta = Turn::from_long_double(p.kv * static_cast<long double>(t));
    double ds = delta.to_signed();
    double mid = (theta + Turn::from_double(0.5 * ds)).to_double();
    double diff = 2.0 * std::cos(kTwoPi * mid) * std::sin(kPi * ds);
    s += spec_.terms[i].amplitude * diff /
         (kTwoPi * static_cast<double>(p.kv));
  }
  return s;
}

std::shared_ptr<const TrigCocycle> make_cocycle(CocycleSpec spec) {
  return std::make_shared<const TrigCocycle>(std::move(spec));
}

IdentityCheck check_identity(const Cocycle& f, std::size_t samples,
                             std::uint64_t seed) {
  const BaseSystem& base = f.base();
  Rng rng(seed);
  IdentityCheck out;
  out.x = TorusPoint(base.dim());
  for (std::size_t s = 0; s < samples; ++s) {
    TorusPoint x(base.dim());
    for (std::size_t i = 0; i < base.dim(); ++i) x[i] = Turn(rng.next());
    Time a, b, ab;
    if (base.discrete()) {
      std::int64_t n = rng.integer(-(1 << 20), 1 << 20);
      std::int64_t m = rng.integer(-(1 << 20), 1 << 20);
      a = n;
      b = m;
      ab = n + m;
    } else {
      double u = rng.uniform(-1000.0, 1000.0);
      double v = rng.uniform(-1000.0, 1000.0);
      a = u;
      b = v;
      ab = u + v;
    }
    double r = std::fabs(f.evaluate(a, base.act(b, x)) + f.evaluate(b, x) -
                         f.evaluate(ab, x));
    if (!(r <= out.max_residual)) {
      out.max_residual = r;
      out.tau = a;
      out.tau2 = b;
      out.x = x;
    }
  }
  return out;
}

}  // namespace skewlab
