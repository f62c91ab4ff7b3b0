#pragma once

#include <string>
#include <vector>

#include "skewlab/base_system.hpp"

namespace skewlab {

struct ShippedConstant {
  std::string name;
  Turn turn;              // value mod 1 as fixed point
  long double value = 0;  // real value
  std::vector<Convergent> convergents;
  std::string provenance;
};

// Liouville-type rotation number with partial quotients 10, 10^2, 10^4 and
// then large ones, held exactly in 64-bit fixed point.
const ShippedConstant& alpha_liouville();
const ShippedConstant& golden_rotation();
// sqrt(2), slope of the shipped linear flow direction (1, sqrt 2).
const ShippedConstant& beta_sqrt2();

// Lookup by name; throws UsageError for unknown names.
const ShippedConstant& shipped_constant(const std::string& name);
std::vector<std::string> shipped_constant_names();

BaseSystem liouville_rotation();
BaseSystem golden_rotation_system();
BaseSystem sqrt2_flow();

}  // namespace skewlab
