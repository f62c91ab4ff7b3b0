#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <iosfwd>
#include <string>
#include <vector>

#include "skewlab/torus.hpp"

namespace skewlab {

// Cells of X x [-R, R]: `torus_dims` circle coordinates split into n = 1/h
// cells each, and the fiber split into 2R/h cells.
struct GridGeometry {
  double radius = 8.0;
  std::uint32_t cells_per_unit = 128;
  std::uint32_t torus_dims = 1;

  double h() const { return 1.0 / cells_per_unit; }
  std::int64_t fiber_cells() const;
  std::uint64_t torus_cells() const;
  bool operator==(const GridGeometry&) const = default;
};

// Throws UsageError unless 1/h and 2R/h are integers and the grid fits in
// 64-bit indices.
GridGeometry make_geometry(double radius, double h, std::size_t torus_dims);

inline constexpr std::size_t kMaxCellDims = kMaxTorusDim + 1;
using CellCoord = std::array<std::int64_t, kMaxCellDims>;

// Sorted, deduplicated cell indices. Index = torus part * fiber_cells +
// fiber cell, torus part in mixed radix with coordinate 0 most significant.
class GridSet {
 public:
  // Throws EmptySetError when `cells` is empty.
  GridSet(GridGeometry geometry, std::vector<std::uint64_t> cells,
          std::uint32_t dilations = 0);

  const GridGeometry& geometry() const { return geom_; }
  std::uint32_t dilations() const { return dilations_; }
  const std::vector<std::uint64_t>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool contains(std::uint64_t cell) const;

  CellCoord decode(std::uint64_t cell) const;
  std::uint64_t encode(const CellCoord& c) const;

  // Chebyshev one-cell neighborhood, wrapping on torus coordinates and
  // clipped at the fiber window.
  GridSet dilated() const;
  // Cells whose whole one-cell neighborhood is present. Neighbors beyond the
  // fiber window count as present. Returns an empty vector instead of
  // throwing when nothing survives.
  std::vector<std::uint64_t> eroded_cells() const;
  // Moves every cell by `shift` fiber cells and drops cells leaving the
  // window. Throws EmptySetError when nothing stays.
  GridSet fiber_shifted(std::int64_t shift) const;
  // Restricts to a smaller radius with the same h.
  GridSet cropped(double radius) const;

  bool operator==(const GridSet& o) const {
    return geom_ == o.geom_ && cells_ == o.cells_;
  }

 private:
  GridGeometry geom_;
  std::vector<std::uint64_t> cells_;
  std::uint32_t dilations_ = 0;
};

GridSet set_union(const GridSet& a, const GridSet& b);
// Throws EmptySetError when the intersection is empty.
GridSet set_intersection(const GridSet& a, const GridSet& b);
bool intersects(const std::vector<std::uint64_t>& a,
                const std::vector<std::uint64_t>& b);

// Accumulates sample points into cells.
class GridBuilder {
 public:
  explicit GridBuilder(GridGeometry geometry);

  // coords are the torus coordinates followed by nothing; a is the fiber
  // value. Points outside the window are ignored. Returns true if inserted.
  bool add(const Turn* coords, double a);
  bool add_cell(std::uint64_t cell);
  std::size_t size() const { return count_; }
  // Throws EmptySetError when nothing was added.
  GridSet build(std::uint32_t dilations = 0) const;
  const GridGeometry& geometry() const { return geom_; }

 private:
  void grow();

  GridGeometry geom_;
  std::vector<std::uint64_t> slots_;
  std::size_t count_ = 0;
  std::uint64_t mask_ = 0;
};

// Hausdorff distance in the Chebyshev metric on cell centers (torus
// coordinates wrap), times h. Throws UsageError on geometry mismatch.
double truncated_fell_distance(const GridSet& a, const GridSet& b);
// The truncated Fell distance when it is at most `cap`, else nullopt. Small
// caps (two cells or less) are answered by neighborhood lookups only.
std::optional<double> distance_within(const GridSet& a, const GridSet& b,
                                      double cap);
// max over a in A of the distance to B.
double directed_distance(const GridSet& a, const GridSet& b);

// Binary dump, little-endian:
//   magic "SKGS", u32 version, f64 R, f64 h, u32 torus_dims, u32 dilations,
//   u32 format (0 packed bitmask over all cells, 1 sorted u64 index list),
//   u64 cell count, payload.
void write_gridset(std::ostream& os, const GridSet& s);
GridSet read_gridset(std::istream& is);
// One line of CSV: R,h,torus_dims,dilations,cells,fiber_min,fiber_max.
std::string gridset_summary_header();
std::string gridset_summary_row(const GridSet& s);

}  // namespace skewlab
