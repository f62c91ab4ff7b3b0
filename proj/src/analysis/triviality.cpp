#include <algorithm>
#include <cmath>
#include <numbers>

#include "skewlab/analysis.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/parallel.hpp"
#include "skewlab/rng.hpp"

namespace skewlab {

double PhaseGenerator::operator()(const TorusPoint& phase) const {
  double s = drift;
  for (const TrigTerm& t : terms) {
    Turn theta = pairing(t.freq, phase) + Turn::from_double(t.phase);
    s += t.amplitude * std::cos(2.0 * std::numbers::pi * theta.to_double());
  }
  return s;
}

PhaseGenerator lift_generator(const SkewSystem& sys, double scale) {
  const auto* f = dynamic_cast<const TrigCocycle*>(&sys.cocycle());
  if (!f || f->spec().mode != CocycleMode::GeneratorFunction)
    throw UnsupportedError("lifting needs a trigonometric generator over a rotation");
  PhaseGenerator g;
  g.drift = f->spec().drift * scale;
  const std::size_t extra = sys.phase_dim() - sys.base().dim();
  for (TrigTerm t : f->spec().terms) {
    t.freq.resize(t.freq.size() + extra, 0);
    t.amplitude *= scale;
    g.terms.push_back(std::move(t));
  }
  return g;
}

namespace {

void check_generator(const SkewSystem& sys, const PhaseGenerator& g) {
  for (const TrigTerm& t : g.terms) {
    if (t.freq.size() != sys.phase_dim())
      throw UsageError("f2 frequencies must have one entry per phase coordinate");
    if (!std::isfinite(t.amplitude) || !std::isfinite(t.phase))
      throw UsageError("f2 has a non-finite coefficient");
  }
  if (!std::isfinite(g.drift)) throw UsageError("f2 has a non-finite drift");
}

}  // namespace

double phase_birkhoff_sum(const SkewSystem& sys, const PhaseGenerator& g,
                          const SkewPoint& p, std::int64_t tau) {
  check_generator(sys, g);
  OrbitWalker w(sys, p);
  long double s = 0;
  if (tau >= 0) {
    for (std::int64_t k = 0; k < tau; ++k) {
      s += g(phase_point(w.point()));
      w.forward();
    }
  } else {
    for (std::int64_t k = 0; k < -tau; ++k) {
      w.backward();
      s -= g(phase_point(w.point()));
    }
  }
  return static_cast<double>(s);
}

TrivialityReport relative_triviality(const SkewSystem& sys, const PhaseGenerator& f2,
                                     const TrivialityOptions& opt) {
  if (!sys.discrete()) throw UsageError("relative triviality is implemented for Z actions");
  if (opt.eps.empty()) throw UsageError("relative triviality needs an eps grid");
  for (double e : opt.eps)
    if (!(e > 0.0) || e >= 0.5) throw UsageError("eps values must be in (0, 1/2)");
  if (opt.orbit_length < 1024) throw UsageError("orbit length must be >= 1024");
  if (opt.budget < 2) throw UsageError("budget must be >= 2");
  check_generator(sys, f2);
  const double eps_max = *std::max_element(opt.eps.begin(), opt.eps.end());

  TrivialityReport rep;
  rep.start = random_phase_point(sys, Rng(opt.seed).split(0).next());
  const auto L = static_cast<std::size_t>(opt.orbit_length);
  std::vector<TorusPoint> phase(L + 1);
  std::vector<double> a(L + 1);
  std::vector<long double> s2(L + 1);
  OrbitWalker w(sys, rep.start);
  long double acc = 0;
  for (std::size_t k = 0; k <= L; ++k) {
    SkewPoint p = w.point();
    phase[k] = phase_point(p);
    a[k] = p.a;
    s2[k] = acc;
    acc += f2(phase[k]);
    if (k < L) w.forward();
  }

  const auto want = static_cast<std::size_t>(
      std::clamp(std::sqrt(static_cast<double>(opt.budget)), 8.0, 2048.0));
  LagSchedule lags = return_lags(sys.base(), eps_max, opt.orbit_length / 2, want);
  const std::uint64_t per_lag =
      lags.lags.empty() ? 0 : std::max<std::uint64_t>(1, opt.budget / lags.lags.size());
  const std::size_t E = opt.eps.size();
  std::vector<std::vector<TrivialityRow>> partial(lags.lags.size(), std::vector<TrivialityRow>(E));
  parallel_for(lags.lags.size(), [&](std::size_t i) {
    const auto tau = std::get<std::int64_t>(lags.lags[i]);
    Rng rng = Rng(opt.seed).split(1 + i);
    auto& rows = partial[i];
    for (std::uint64_t j = 0; j < per_lag; ++j) {
      auto n = static_cast<std::size_t>(rng.integer(0, opt.orbit_length - tau));
      double d = distance(phase[n], phase[n + static_cast<std::size_t>(tau)]);
      if (!(d < eps_max)) continue;
      double f1 = a[n + static_cast<std::size_t>(tau)] - a[n];
      double v = static_cast<double>(s2[n + static_cast<std::size_t>(tau)] - s2[n]);
      for (std::size_t e = 0; e < E; ++e) {
        if (!(d < opt.eps[e]) || !(std::fabs(f1) < opt.eps[e])) continue;
        TrivialityRow& r = rows[e];
        ++r.witnesses;
        if (r.no_data || std::fabs(v) > r.max_f2) {
          r.no_data = false;
          r.max_f2 = std::fabs(v);
          r.tau = tau;
          r.index = static_cast<std::int64_t>(n);
          r.f1 = f1;
          r.displacement = d;
        }
      }
    }
  });
  rep.rows.resize(E);
  for (std::size_t e = 0; e < E; ++e) {
    TrivialityRow& out = rep.rows[e];
    out.eps = opt.eps[e];
    for (auto& rows : partial) {
      const TrivialityRow& r = rows[e];
      out.witnesses += r.witnesses;
      if (!r.no_data && (out.no_data || r.max_f2 > out.max_f2)) {
        std::uint64_t keep = out.witnesses;
        out = r;
        out.eps = opt.eps[e];
        out.witnesses = keep;
      }
    }
    if (!out.no_data) {
      // The witness start point, recomputed from the orbit index.
      out.p = skew_act(sys, Time{out.index}, rep.start);
    }
  }
  rep.budget_used = per_lag * lags.lags.size();
  return rep;
}

}  // namespace skewlab
