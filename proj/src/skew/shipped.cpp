#include "skewlab/shipped.hpp"

#include "skewlab/constants.hpp"

namespace skewlab {

CocycleSpec example_perturbation(const ExampleParameters& p,
                                 SmallDivisorReport* report) {
  SmallDivisorResult g = small_divisor_builder(sqrt2_flow(), p.g_levels, p.g_decay);
  if (report) *report = g.report;
  return rescale_perturbation(g.spec, p.g_target);
}

namespace {

SkewPoint generic_start(bool fiber) {
  SkewPoint s;
  s.x = TorusPoint{0.0};
  if (fiber) s.m = TorusPoint{0.0, 0.0};
  s.a = 0.0;
  return s;
}

}  // namespace

ShippedExample small_divisor_plain(const ExampleParameters& p) {
  SmallDivisorResult f = small_divisor_builder(liouville_rotation(), p.levels, p.decay);
  ShippedExample ex;
  ex.name = "small_divisor";
  ex.description = "small-divisor cocycle over alpha_liouville, no fiber";
  ex.system = SkewSystem(make_cocycle(f.spec));
  ex.start = generic_start(false);
  ex.report = f.report;
  return ex;
}

ShippedExample example_zi(const ExampleParameters& p) {
  SmallDivisorResult f = small_divisor_builder(liouville_rotation(), p.levels, p.decay);
  ShippedExample ex;
  ex.name = "example_zi";
  ex.description =
      "T(x,y,z) = (x+alpha, y+f(x), z+sqrt2 f(x)), cocycle h = f";
  ex.system = SkewSystem(make_cocycle(f.spec), RokhlinFiber{sqrt2_flow(), std::nullopt});
  ex.start = generic_start(true);
  ex.report = f.report;
  return ex;
}

ShippedExample example_pe(const ExampleParameters& p) {
  SmallDivisorResult f = small_divisor_builder(liouville_rotation(), p.levels, p.decay);
  SmallDivisorReport g_report;
  CocycleSpec g = example_perturbation(p, &g_report);
  ShippedExample ex;
  ex.name = "example_pe";
  ex.description = "example_zi with cocycle f + g(f, (y,z))";
  ex.system = SkewSystem(make_cocycle(f.spec), RokhlinFiber{sqrt2_flow(), g});
  ex.start = generic_start(true);
  ex.report = f.report;
  ex.perturbation_report = g_report;
  return ex;
}

ShippedExample coboundary_sin() {
  BaseSystem base = golden_rotation_system();
  double alpha = base.rotation_vector()[0].to_double();
  CocycleSpec spec;
  spec.base = base;
  spec.mode = CocycleMode::GeneratorFunction;
  // sin(2 pi u) = cos(2 pi (u - 1/4))
  spec.terms = {{{1}, 1.0, alpha - 0.25}, {{1}, -1.0, -0.25}};
  ShippedExample ex;
  ex.name = "coboundary_sin";
  ex.description = "f(x) = sin(2pi(x+alpha)) - sin(2pi x) over the golden rotation";
  ex.system = SkewSystem(make_cocycle(spec));
  ex.start = generic_start(false);
  return ex;
}

ShippedExample transient_fiber(const ExampleParameters& p) {
  SmallDivisorReport g_report;
  CocycleSpec spec = example_perturbation(p, &g_report);
  spec.drift = 1.0;
  ShippedExample ex;
  ex.name = "transient_fiber";
  ex.description = "flow cocycle 1 + g over (T^2, phi)";
  ex.system = SkewSystem(make_cocycle(spec));
  ex.start.x = TorusPoint{0.0, 0.0};
  ex.start.a = 0.0;
  ex.perturbation_report = g_report;
  return ex;
}

}  // namespace skewlab
