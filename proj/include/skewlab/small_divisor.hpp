#pragma once

#include <string>
#include <vector>

#include "skewlab/cocycle.hpp"

namespace skewlab {

struct SmallDivisorLevel {
  int level = 0;
  std::vector<std::int64_t> freq;
  double divisor = 0.0;  // ||q_j alpha|| or |k.v|
  double amplitude = 0.0;
  double coefficient = 0.0;  // amplitude / (2 pi divisor)
};

struct SmallDivisorReport {
  std::vector<SmallDivisorLevel> levels;
  bool strictly_increasing = false;
  double last_coefficient = 0.0;
  std::string provenance;
};

struct SmallDivisorResult {
  CocycleSpec spec;
  SmallDivisorReport report;
};

inline constexpr int kMaxSmallDivisorLevels = 20;

// Terms at the convergent denominators q_1..q_J of the base (frequency q_j
// for a rotation, (-p_j, q_j) for a flow with direction (1, beta)) with
// amplitude decay^j and phase 0. Throws UsageError when J is outside 1..20
// or the base does not store J convergents past q_0.
SmallDivisorResult small_divisor_builder(const BaseSystem& base, int levels,
                                         double decay);

// Scales a flow generator so that sum |amplitude| equals target, which must
// lie in (0, 1/4]. Then |g(t, m)| <= target |t| < |t|/2.
CocycleSpec rescale_perturbation(CocycleSpec spec, double target);

}  // namespace skewlab
