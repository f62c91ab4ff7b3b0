#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skewlab/skew.hpp"

namespace skewlab {

// Base return lags: positive times tau with d(x, tau x) < eps (the base
// displacement does not depend on x). Integer lags are scanned up to
// `limit`; flow lags on a grid of step eps / (4 max|v_i|) up to limit steps.
// At most `count` lags are kept, spread evenly over dyadic scales.
struct LagSchedule {
  std::vector<Time> lags;
  std::vector<double> displacement;
  double step = 1.0;
  std::int64_t limit = 0;
  std::uint64_t returns_found = 0;
};

LagSchedule return_lags(const BaseSystem& base, double eps, std::int64_t limit,
                        std::size_t count);

// (tau, p) with the change of the R coordinate and the X x M displacement.
struct Witness {
  Time tau{std::int64_t{0}};
  SkewPoint p;
  double increment = 0.0;
  double displacement = 0.0;
};

Witness make_witness(const SkewSystem& sys, const Time& tau, const SkewPoint& p);

// Seeded phase point with the fiber coordinate a.
SkewPoint random_phase_point(const SkewSystem& sys, std::uint64_t seed, double a = 0.0);

// ---------------------------------------------------------------------------
// Recurrence

enum class Recurrence { Recurrent, Transient, Inconclusive };
const char* to_string(Recurrence r);

struct RecurrenceOptions {
  std::uint64_t budget = 1'000'000;  // >= 1000
  std::uint64_t seed = 1;
  double a0 = 0.0;                   // fiber coordinate of the starts
  std::vector<double> scales = {0.1, 0.05, 0.01};
  std::size_t starts = 4;            // escape profile starts
  double margin = 1.0;               // required growth between blocks
  double escape_threshold = 8.0;     // last block minimum must exceed it
};

struct ScaleWitnesses {
  double eps = 0.0;
  std::int64_t large_lag_steps = 0;  // |tau| / step needed to count as large
  std::optional<Witness> positive;   // largest qualifying tau > 0
  std::optional<Witness> negative;
  std::uint64_t count = 0;           // all witnesses at this scale
};

struct EscapeProfile {
  std::size_t start = 0;
  int direction = 1;
  std::vector<double> block_start;   // |t| at the start of each dyadic block
  std::vector<double> block_min;     // min |a| over the block samples
  bool escapes = false;
};

struct RecurrenceVerdict {
  Recurrence verdict = Recurrence::Inconclusive;
  std::vector<ScaleWitnesses> scales;
  std::vector<EscapeProfile> profile;
  std::uint64_t budget_used = 0;
};

RecurrenceVerdict classify_recurrence(const SkewSystem& sys,
                                      const RecurrenceOptions& opt = {});

// ---------------------------------------------------------------------------
// Essential range

struct RangeOptions {
  double window = 5.0;  // W
  double delta = 0.05;  // fiber tolerance, also the value resolution
  double eps = 0.01;    // phase tolerance
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 1;
  std::int64_t lag_limit = 0;  // 0 picks 2^26 (Z) or 2^24 steps (R)
};

struct Candidate {
  double value = 0.0;  // k * delta
  Witness witness;     // |increment - value| <= delta / 2
};

struct EssentialRangeReport {
  RangeOptions options;
  std::vector<Candidate> candidates;  // ascending values
  std::uint64_t budget_used = 0;
  std::uint64_t lags = 0;
  std::int64_t lag_limit = 0;

  bool has(double value) const;
  // Every candidate a has a candidate within delta of -a.
  bool symmetric() const;
};

EssentialRangeReport estimate_essential_range(const SkewSystem& sys,
                                              const RangeOptions& opt = {});

// Same candidate values up to one resolution step in each direction.
bool same_range(const EssentialRangeReport& a, const EssentialRangeReport& b);

// ---------------------------------------------------------------------------
// Gap scan

struct GapOptions {
  double kappa = 0.3;
  double eps = 0.01;
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 1;
  std::int64_t lag_limit = 0;
};

struct GapScanResult {
  bool clean = true;
  std::optional<Witness> violation;  // increment in [-2k, -k) or (k, 2k]
  std::uint64_t budget_used = 0;
  GapOptions options;
};

GapScanResult gap_scan(const SkewSystem& sys, const GapOptions& opt = {});

// ---------------------------------------------------------------------------
// Gottschalk-Hedlund

struct GHOptions {
  std::int64_t steps = 1'000'000;  // N >= 10^4
  double h = 1.0 / 1024;
  std::optional<TorusPoint> start;  // x bar, the origin by default
};

struct GHWitness {
  Time tau{std::int64_t{0}};
  TorusPoint x;
  double value = 0.0;         // f(tau, x)
  double displacement = 0.0;  // d(x, tau x)
};

struct GHResult {
  bool coboundary = false;
  TransferTable table;        // Coboundary
  double residual = 0.0;      // sup over the grid of |f(1,x) - b(Tx) + b(x)|
  GHWitness witness;          // NotCoboundary
  double early_max = 0.0;     // max |f(t, x bar)| over the first N/16 samples
  double overall_max = 0.0;
  std::int64_t steps = 0;
  double h = 0.0;
  double tolerance = 0.0;     // max(10 h, 1e-6)
};

// Throws InconclusiveError when the sums stay bounded but two visits of one
// bin disagree beyond the tolerance, or a bin is never visited. The fiber of
// a Rokhlin system is ignored: the test concerns f over X.
GHResult gottschalk_hedlund(const SkewSystem& sys, const GHOptions& opt = {});

// ---------------------------------------------------------------------------
// Relative triviality

// Generator on the phase space X x M; its Birkhoff sums along the skew
// orbit define the second cocycle.
struct PhaseGenerator {
  std::vector<TrigTerm> terms;  // frequencies over (x, m) coordinates
  double drift = 0.0;
  double operator()(const TorusPoint& phase) const;
};

// The generator of f(1, x) over X, as a phase generator that ignores m.
PhaseGenerator lift_generator(const SkewSystem& sys, double scale = 1.0);

struct TrivialityOptions {
  std::vector<double> eps = {0.1, 0.05, 0.01};
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 1;
  std::int64_t orbit_length = 1 << 20;
};

struct TrivialityRow {
  double eps = 0.0;
  std::uint64_t witnesses = 0;
  bool no_data = true;
  double max_f2 = 0.0;
  // The witness achieving max_f2: tau and the orbit index of its start.
  std::int64_t tau = 0;
  std::int64_t index = 0;
  SkewPoint p;
  double f1 = 0.0;
  double displacement = 0.0;
};

struct TrivialityReport {
  std::vector<TrivialityRow> rows;
  std::uint64_t budget_used = 0;
  SkewPoint start;
};

// f1 is the R increment of the skew system, f2 the Birkhoff sum of `f2`.
// Z actions only.
TrivialityReport relative_triviality(const SkewSystem& sys,
                                     const PhaseGenerator& f2,
                                     const TrivialityOptions& opt = {});

// Recomputes f2(tau, p) for a stored witness.
double phase_birkhoff_sum(const SkewSystem& sys, const PhaseGenerator& g,
                          const SkewPoint& p, std::int64_t tau);

// ---------------------------------------------------------------------------
// RIM projection

// f_alpha(t, x) = average over the fiber grid of f(t, (x, m)). For a Rokhlin
// system f(t, (x, m)) is the R increment; for a product rotation or flow the
// first `split` coordinates form X_alpha and the rest the fiber. Throws
// UnsupportedError for anything else.
class RimProjection final : public Cocycle {
 public:
  RimProjection(const SkewSystem& sys, std::size_t fiber_cells);
  RimProjection(std::shared_ptr<const TrigCocycle> f, std::size_t split,
                std::size_t fiber_cells);

  const BaseSystem& base() const override { return base_; }
  double evaluate(const Time& t, const TorusPoint& x) const override;
  double generator(const TorusPoint& x) const override;
  std::size_t fiber_nodes() const { return nodes_.size(); }

 private:
  BaseSystem base_;
  std::optional<SkewSystem> sys_;
  std::shared_ptr<const TrigCocycle> product_;
  std::size_t split_ = 0;
  std::vector<TorusPoint> nodes_;
};

// ---------------------------------------------------------------------------
// Reports: a key=value header block, a blank line, then CSV rows.

void write_report(std::ostream& os, const RecurrenceVerdict& r);
void write_report(std::ostream& os, const EssentialRangeReport& r);
void write_report(std::ostream& os, const GapScanResult& r);
void write_report(std::ostream& os, const GHResult& r);
void write_report(std::ostream& os, const TrivialityReport& r);
void write_transfer_csv(std::ostream& os, const TransferTable& t);

// Shared helpers for report writers. Torus points are written as one CSV
// field with coordinates joined by ';' so column order does not depend on
// the dimension.
std::string format_double(double v);
std::string format_point(const TorusPoint& x);
// Three fields: x, m (empty without a fiber), a.
std::string point_columns(const SkewPoint& p);

}  // namespace skewlab
