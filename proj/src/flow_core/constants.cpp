#include "skewlab/constants.hpp"

#include <cmath>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {

constexpr std::int64_t kMaxRotationQ = std::int64_t{1} << 62;

ShippedConstant make_liouville() {
  ShippedConstant c;
  c.name = "alpha_liouville";
  // [0;10,10^2,10^4,10^8,10^16] rounded to 2^-64, minus 4 units. The shift
  // keeps the stored expansion at [0;10,100,10000,50317,3,3,4,...] so that
  // ||q_j alpha|| decreases strictly through j = 5.
  c.turn = Turn(0x19930d8e5de01608ULL);
  c.value = c.turn.to_long_double();
  c.convergents = turn_convergents(c.turn, kMaxRotationQ);
  c.provenance =
      "alpha_liouville: fixed-point 0x19930d8e5de01608/2^64, CF "
      "[0;10,100,10000,50317,3,3,4,...]";
  return c;
}

ShippedConstant make_golden() {
  ShippedConstant c;
  c.name = "golden";
  c.turn = Turn(0x9e3779b97f4a7c15ULL);  // (sqrt 5 - 1)/2
  c.value = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  c.convergents = turn_convergents(c.turn, std::int64_t{1} << 31);
  c.provenance = "golden: (sqrt5-1)/2, Fibonacci convergents";
  return c;
}

ShippedConstant make_sqrt2() {
  ShippedConstant c;
  c.name = "sqrt2";
  c.value = std::sqrt(2.0L);
  c.turn = Turn::from_long_double(c.value);
  // p^2 - 2 q^2 = +-1, exact.
  std::int64_t p = 1, q = 1;
  while (q < (std::int64_t{1} << 31)) {
    c.convergents.push_back({p, q});
    std::int64_t pn = p + 2 * q;
    q = p + q;
    p = pn;
  }
  c.provenance = "sqrt2: convergents of [1;2,2,2,...]";
  return c;
}

}  // namespace

const ShippedConstant& alpha_liouville() {
  static const ShippedConstant c = make_liouville();
  return c;
}

const ShippedConstant& golden_rotation() {
  static const ShippedConstant c = make_golden();
  return c;
}

const ShippedConstant& beta_sqrt2() {
  static const ShippedConstant c = make_sqrt2();
  return c;
}

const ShippedConstant& shipped_constant(const std::string& name) {
  if (name == "alpha_liouville") return alpha_liouville();
  if (name == "golden") return golden_rotation();
  if (name == "sqrt2") return beta_sqrt2();
  throw UsageError("unknown constant '" + name + "'");
}

std::vector<std::string> shipped_constant_names() {
  return {"alpha_liouville", "golden", "sqrt2"};
}

BaseSystem liouville_rotation() {
  const auto& c = alpha_liouville();
  return BaseSystem::rotation({c.turn}, c.provenance, c.convergents);
}

BaseSystem golden_rotation_system() {
  const auto& c = golden_rotation();
  return BaseSystem::rotation({c.turn}, c.provenance, c.convergents);
}

BaseSystem sqrt2_flow() {
  const auto& c = beta_sqrt2();
  return BaseSystem::linear_flow({1.0L, c.value}, c.provenance, c.convergents);
}

}  // namespace skewlab
