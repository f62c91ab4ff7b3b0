#include "skewlab/small_divisor.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "skewlab/errors.hpp"

namespace skewlab {

SmallDivisorResult small_divisor_builder(const BaseSystem& base, int levels,
                                         double decay) {
  if (levels < 1 || levels > kMaxSmallDivisorLevels)
    throw UsageError("small-divisor levels must be in 1..20");
  if (!(decay > 0.0) || !std::isfinite(decay))
    throw UsageError("small-divisor decay must be positive");
  const auto& conv = base.convergents();
  if (conv.size() <= static_cast<std::size_t>(levels))
    throw UsageError("base stores " +
                     std::to_string(conv.empty() ? 0 : conv.size() - 1) +
                     " convergents past q_0, builder needs " +
                     std::to_string(levels));
  SmallDivisorResult out;
  out.spec.base = base;
  if (base.discrete()) {
    if (base.dim() != 1)
      throw UsageError("small-divisor builder needs a 1-d rotation");
    out.spec.mode = CocycleMode::GeneratorFunction;
  } else {
    if (base.dim() != 2)
      throw UsageError("small-divisor builder needs a flow on T^2");
    out.spec.mode = CocycleMode::FlowGenerator;
  }
  double amp = 1.0;
  for (int j = 1; j <= levels; ++j) {
    amp *= decay;
    const Convergent& c = conv[static_cast<std::size_t>(j)];
    SmallDivisorLevel level;
    level.level = j;
    level.amplitude = amp;
    if (base.discrete()) {
      level.freq = {c.q};
      level.divisor = std::fabs(base.rotation_vector()[0].times(c.q).to_signed());
    } else {
      level.freq = {-c.p, c.q};
      long double kv = -static_cast<long double>(c.p) +
                       static_cast<long double>(c.q) * base.direction()[1];
      level.divisor = static_cast<double>(std::fabs(kv));
    }
    level.coefficient = amp / (2.0 * std::numbers::pi * level.divisor);
    out.spec.terms.push_back({level.freq, amp, 0.0});
    out.report.levels.push_back(level);
  }
  out.report.strictly_increasing = true;
  for (std::size_t i = 1; i < out.report.levels.size(); ++i)
    if (!(out.report.levels[i].coefficient >
          out.report.levels[i - 1].coefficient))
      out.report.strictly_increasing = false;
  out.report.last_coefficient = out.report.levels.back().coefficient;
  std::ostringstream os;
  os << "small-divisor builder J=" << levels << " decay=" << decay << " over "
     << base.provenance();
  out.report.provenance = os.str();
  return out;
}

CocycleSpec rescale_perturbation(CocycleSpec spec, double target) {
  if (!(target > 0.0) || target > kPerturbationBound)
    throw UsageError("perturbation target must lie in (0, 1/4]");
  if (spec.mode != CocycleMode::FlowGenerator)
    throw UsageError("perturbations are flow generators");
  if (spec.drift != 0.0) throw UsageError("perturbations carry no drift");
  double sum = 0.0;
  for (const auto& t : spec.terms) sum += std::fabs(t.amplitude);
  if (!(sum > 0.0)) throw UsageError("cannot rescale a zero perturbation");
  // Slightly under target so rounding cannot push the sum past it.
  const double factor = target / sum * (1.0 - 1e-14);
  for (auto& t : spec.terms) t.amplitude *= factor;
  return spec;
}

}  // namespace skewlab
