#include <cmath>
#include <sstream>

#include "skewlab/analysis.hpp"
#include "skewlab/cli.hpp"
#include "skewlab/constants.hpp"

namespace skewlab {

namespace {

std::string num(double v) { return format_double(v); }

void builder_comment(std::ostream& os, const std::string& what, const SmallDivisorReport& r) {
  os << "# " << what << ", small-divisor builder report:\n";
  for (const auto& l : r.levels) {
    os << "#   level " << l.level << ": freq = ";
    for (std::size_t i = 0; i < l.freq.size(); ++i) os << (i ? ", " : "") << l.freq[i];
    os << "  divisor = " << num(l.divisor) << "  amplitude = " << num(l.amplitude)
       << "  coefficient = " << num(l.coefficient) << '\n';
  }
  os << "#   coefficients strictly increasing: " << (r.strictly_increasing ? "yes" : "no") << '\n';
  std::istringstream prov(r.provenance);
  for (std::string line; std::getline(prov, line);) os << "#   " << line << '\n';
}

void start_block(std::ostream& os, bool fiber, std::size_t xdim) {
  os << "  start {\n    x = 0";
  for (std::size_t i = 1; i < xdim; ++i) os << ", 0";
  os << '\n';
  if (fiber) os << "    m = 0, 0\n";
  os << "    a = 0\n  }\n";
}

void check_block(std::ostream& os) {
  os << "  check-cocycle {\n    samples = 10000\n    tolerance = 1e-9\n  }\n";
}

std::string zi_text(const ExampleParameters& p, bool perturbed) {
  ShippedExample ex = perturbed ? example_pe(p) : example_zi(p);
  std::ostringstream os;
  os << "# " << ex.name << ": " << ex.description << '\n'
     << "# f is built over alpha_liouville from the convergent denominators q_j\n"
     << "# with amplitude decay^j; the fiber flow phi on T^2 has direction (1, sqrt2).\n";
  builder_comment(os, "f", ex.report);
  if (perturbed) {
    builder_comment(os, "g", *ex.perturbation_report);
    os << "# certificate: sum |A| = " << num(ex.system.perturbation_certificate())
       << " <= 1/4, so |g(t, m)| <= |t|/4 < |t|/2\n";
  }
  os << "\nseed = 1\noutput = skewlab-out/" << ex.name << "\n\n"
     << "system {\n  name = " << ex.name << '\n'
     << "  base {\n    kind = rotation\n    alpha = alpha_liouville\n  }\n"
     << "  cocycle {\n    small-divisor {\n      levels = " << p.levels
     << "\n      decay = " << num(p.decay) << "\n    }\n  }\n"
     << "  rokhlin {\n    direction = 1, sqrt2\n";
  if (perturbed)
    os << "    perturbation {\n      small-divisor {\n        levels = " << p.g_levels
       << "\n        decay = " << num(p.g_decay) << "\n      }\n"
       << "      target = " << num(p.g_target) << '\n'
       << "      certificate = " << num(p.g_target) << "\n    }\n";
  os << "  }\n";
  start_block(os, true, 1);
  os << "}\n\nanalysis {\n";
  check_block(os);
  os << "  orbit {\n    steps = 1000\n  }\n"
     << "  essential-range {\n    window = 5\n    delta = 0.05\n    eps = 0.01\n"
     << "    budget = 1000000\n";
  if (!perturbed) os << "    expect = 0\n";
  os << "  }\n";
  if (!perturbed) {
    os << "  gap-scan {\n    kappa = 0.3\n    eps = 0.01\n    budget = 1000000\n  }\n"
       << "  recurrence {\n    budget = 1000000\n    expect = recurrent\n  }\n"
       << "  relative-triviality {\n    eps = 0.1, 0.05, 0.01\n    budget = 1000000\n"
       << "    max_ratio = 1.000001\n    generator {\n      lift = 1\n    }\n  }\n";
  }
  os << "  rim-project {\n    fiber_cells = 32\n    grid = 64\n  }\n"
     << "  prolongation {\n    radius = 4\n    h = 1/32\n    steps = 1000000\n  }\n";
  if (perturbed) {
    os << "  decompose {\n    radius = 4\n    h = 1/32\n    steps = 1000000\n    pairs = 10\n  }\n"
       << "  mackey {\n    radius = 4\n    d0_radius = 8\n    B = 4\n    h = 1/32\n"
       << "    steps = 1000000\n    samples = 10\n  }\n";
  }
  os << "}\n";
  return os.str();
}

std::string coboundary_text() {
  ShippedExample ex = coboundary_sin();
  double alpha = golden_rotation().turn.to_double();
  std::ostringstream os;
  os << "# " << ex.name << ": " << ex.description << '\n'
     << "# sin(2 pi u) = cos(2 pi (u - 1/4)), so f is two cosine terms.\n"
     << "# transfer function b(x) = sin(2 pi x); alpha = (sqrt5 - 1)/2 = " << num(alpha) << "\n"
     << "# " << golden_rotation().provenance << "\n\n"
     << "seed = 1\noutput = skewlab-out/" << ex.name << "\n\n"
     << "system {\n  name = " << ex.name << '\n'
     << "  base {\n    kind = rotation\n    alpha = golden\n  }\n"
     << "  cocycle {\n"
     << "    term {\n      freq = 1\n      amplitude = 1\n      phase = " << num(alpha - 0.25) << "\n    }\n"
     << "    term {\n      freq = 1\n      amplitude = -1\n      phase = -0.25\n    }\n"
     << "  }\n";
  start_block(os, false, 1);
  os << "}\n\nanalysis {\n";
  check_block(os);
  os << "  coboundary {\n    steps = 1000000\n    h = 1/1024\n    expect = coboundary\n  }\n"
     << "  essential-range {\n    window = 5\n    delta = 0.05\n"
     << "    eps = 0.001\n    budget = 200000\n    expect = 0\n  }\n"
     << "  orbit {\n    steps = 1000\n  }\n"
     << "}\n";
  return os.str();
}

std::string transient_text(const ExampleParameters& p) {
  ShippedExample ex = transient_fiber(p);
  std::ostringstream os;
  os << "# " << ex.name << ": " << ex.description << '\n'
     << "# 1 + g with sum |A| = " << num(p.g_target)
     << " < 1/4 is positive, so the skew flow escapes and 1 + g maps R onto R.\n";
  builder_comment(os, "g", *ex.perturbation_report);
  os << "\nseed = 1\noutput = skewlab-out/" << ex.name << "\n\n"
     << "system {\n  name = " << ex.name << '\n'
     << "  base {\n    kind = flow\n    direction = 1, sqrt2\n  }\n"
     << "  cocycle {\n    drift = 1\n    small-divisor {\n      levels = " << p.g_levels
     << "\n      decay = " << num(p.g_decay) << "\n    }\n"
     << "    target = " << num(p.g_target) << "\n  }\n";
  start_block(os, false, 2);
  os << "}\n\nanalysis {\n";
  check_block(os);
  os << "  recurrence {\n    budget = 1000000\n    expect = transient\n  }\n"
     << "  surjectivity {\n    m_samples = 64\n    radius = 8\n    h = 1/128\n  }\n"
     << "  orbit {\n    steps = 1000\n    time_step = 0.01\n  }\n"
     << "}\n";
  return os.str();
}

}  // namespace

std::vector<std::string> example_config_names() {
  return {"example_zi.cfg", "example_pe.cfg", "coboundary_sin.cfg", "transient_fiber.cfg"};
}

std::string example_config_text(const std::string& name, const ExampleParameters& p) {
  if (name == "example_zi.cfg") return zi_text(p, false);
  if (name == "example_pe.cfg") return zi_text(p, true);
  if (name == "coboundary_sin.cfg") return coboundary_text();
  if (name == "transient_fiber.cfg") return transient_text(p);
  throw UsageError("unknown example config '" + name + "'");
}

std::vector<std::filesystem::path> emit_example_configs(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> out;
  for (const auto& name : example_config_names()) {
    write_file_atomic(dir / name, example_config_text(name));
    out.push_back(dir / name);
  }
  return out;
}

}  // namespace skewlab
