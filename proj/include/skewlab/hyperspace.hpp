#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skewlab/gridset.hpp"
#include "skewlab/skew.hpp"

namespace skewlab {

struct ClosureOptions {
  std::int64_t steps = 10'000'000;  // Z: times -N..N
  double time_step = 1.0 / 256.0;   // R: uniform grid
  double horizon = 1e4;             // R: |t| <= horizon
};

// Rasterized orbit of `start`, clipped to |a| <= R. Throws EmptySetError
// when the orbit never enters the window.
GridSet orbit_closure(const SkewSystem& sys, const SkewPoint& start,
                      const GridGeometry& geom, const ClosureOptions& opt = {});

struct ProlongationOptions {
  ClosureOptions closure;
  int starts = 2;  // K, the center included
  // Strictly decreasing, at least 2 entries. Empty means {h/2, 2^-40}.
  std::vector<double> eps;
  std::uint64_t seed = 1;
};

std::vector<double> default_eps_schedule(const GridGeometry& geom);

// For each eps: the union of the orbits of K starts in the eps-ball around
// `center` (the center itself is start 0), dilated by one cell. Returns the
// intersection over the schedule.
GridSet prolongation(const SkewSystem& sys, const SkewPoint& center,
                     const GridGeometry& geom, const ProlongationOptions& opt);

// Points sampled for the decomposition checks: skew images of the generic
// start with a fresh fiber coordinate and a small a.
struct PartitionOptions {
  GridGeometry geom;
  ProlongationOptions prolong;
  std::size_t pairs = 50;
  std::uint64_t seed = 1;
  // Time range of the skew images used as samples.
  std::int64_t max_shift = 200'000;
};

struct PairRecord {
  std::size_t i = 0, j = 0;
  bool same_orbit = false;  // j was built as a skew image of i
  double distance = 0.0;  // -1 when above 2h
  bool coincide = false;
  bool disjoint = false;
};

struct PartitionReport {
  std::size_t pairs = 0;
  std::size_t coincide = 0;
  std::size_t disjoint = 0;
  std::size_t violations = 0;
  std::vector<SkewPoint> points;
  std::vector<PairRecord> records;
};

PartitionReport verify_partition(const SkewSystem& sys,
                                 const SkewPoint& generic_start,
                                 const PartitionOptions& opt);

// Generic sample points shared by the partition and Mackey checks.
std::vector<SkewPoint> sample_generic_points(const SkewSystem& sys,
                                             const SkewPoint& generic_start,
                                             std::size_t count, double a_range,
                                             std::int64_t max_shift,
                                             std::uint64_t seed);

// R_b D0 = D0 shifted by -b in the fiber, for each b = k h in [-B, B], then
// cropped to `out_radius`. Requires B <= D0 radius / 2 and b on the grid.
struct MackeyOrbit {
  std::vector<double> b;
  std::vector<GridSet> sets;
};

MackeyOrbit mackey_flow(const GridSet& d0, double B, double out_radius);
// One element of the Mackey orbit, shifted and cropped.
GridSet mackey_translate(const GridSet& d0, std::int64_t k, double out_radius);

struct DensityReport {
  std::size_t samples = 0;
  std::size_t covered = 0;
  double worst = 0.0;      // max over samples of min over b
  std::vector<double> nearest;   // per sample
  std::vector<double> best_b;    // per sample
};

// For each sample, the smallest truncated Fell distance to R_b D0 over the
// b-grid of [-B, B]. Translates are built lazily; candidates are ranked by a
// probe lower bound so only a few full distances are computed per sample.
DensityReport mackey_density(const GridSet& d0, double B, double out_radius,
                             const std::vector<GridSet>& samples,
                             double threshold);

struct SurjectivityReport {
  std::size_t samples = 0;
  double max_gap = 0.0;
  std::vector<double> worst_m;
  bool covered = false;
};

// For each m, the values t + g(t, m) on a time grid of step h/2 cover
// [-R, R] with no gap above 2h. `cocycle` is a flow cocycle of the form
// 1 + g over a linear flow.
SurjectivityReport surjectivity_check(const Cocycle& cocycle,
                                      std::size_t m_samples, double R,
                                      double h, std::uint64_t seed);

}  // namespace skewlab
