#pragma once

#include <string>

#include "skewlab/skew.hpp"
#include "skewlab/small_divisor.hpp"

namespace skewlab {

// Constants of the shipped examples.
struct ExampleParameters {
  int levels = 2;          // small-divisor levels of f over alpha_liouville
  double decay = 0.0034;   // amplitude ratio of f
  int g_levels = 2;        // levels of the fiber perturbation over (1, sqrt 2)
  double g_decay = 0.5;
  double g_target = 0.02;  // sum |amplitude| of g after rescaling
};

struct ShippedExample {
  std::string name;
  std::string description;
  SkewSystem system;
  // Start whose base point is generic at desk scale: the transfer function
  // of f is close to 0 there, so its orbit sweeps the full fiber window.
  SkewPoint start;
  SmallDivisorReport report;
  std::optional<SmallDivisorReport> perturbation_report;
};

// f over alpha_liouville with the Rokhlin fiber (T^2, phi) and h = f.
ShippedExample example_zi(const ExampleParameters& p = {});
// As example_zi plus the perturbation g.
ShippedExample example_pe(const ExampleParameters& p = {});
// The same f with no fiber.
ShippedExample small_divisor_plain(const ExampleParameters& p = {});
// f = sin(2 pi (x + alpha)) - sin(2 pi x) over the golden rotation.
ShippedExample coboundary_sin();
// The flow cocycle 1 + g over (T^2, phi).
ShippedExample transient_fiber(const ExampleParameters& p = {});

CocycleSpec example_perturbation(const ExampleParameters& p,
                                 SmallDivisorReport* report = nullptr);

}  // namespace skewlab
