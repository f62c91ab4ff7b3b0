#pragma once

#include <cstdint>

namespace skewlab {

// SplitMix64. Child streams are derived with split(), so subtasks draw
// independent reproducible sequences regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next(); }

  std::uint64_t next();
  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi);
  Rng split(std::uint64_t stream);

 private:
  std::uint64_t state_;
};

}  // namespace skewlab
