#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "cell_tree.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/gridset.hpp"

namespace skewlab {

namespace {

std::int64_t directed_cells(const GridSet& a, const GridSet& b) {
  const detail::CellTree tree(b);
  std::int64_t worst = 0;
  for (std::uint64_t c : a.cells()) {
    if (b.contains(c)) continue;
    // Early break: anything within `worst` cannot raise the maximum.
    std::int64_t d = tree.nearest(a.decode(c), worst);
    worst = std::max(worst, d);
  }
  return worst;
}

// Offsets of Chebyshev norm exactly r, for r = 1..cap.
std::vector<std::vector<CellCoord>> shells(std::size_t dims, std::int64_t cap) {
  std::vector<std::vector<CellCoord>> out(static_cast<std::size_t>(cap) + 1);
  CellCoord o{};
  const std::int64_t side = 2 * cap + 1;
  std::int64_t total = 1;
  for (std::size_t i = 0; i < dims; ++i) total *= side;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t rest = idx, r = 0;
    for (std::size_t i = 0; i < dims; ++i) {
      o[i] = rest % side - cap;
      rest /= side;
      r = std::max<std::int64_t>(r, std::llabs(o[i]));
    }
    if (r > 0) out[static_cast<std::size_t>(r)].push_back(o);
  }
  return out;
}

// Directed distance in cells if it is at most cap, else cap + 1.
std::int64_t bounded_cells(const GridSet& a, const GridSet& b, std::int64_t cap) {
  const GridGeometry& g = a.geometry();
  const std::size_t dims = g.torus_dims + 1;
  const auto sh = shells(dims, cap);
  const std::int64_t P = g.cells_per_unit, F = g.fiber_cells();
  std::int64_t worst = 0;
  for (std::uint64_t c : a.cells()) {
    if (b.contains(c)) continue;
    const CellCoord q = a.decode(c);
    std::int64_t found = cap + 1;
    for (std::int64_t r = 1; r <= cap && found > cap; ++r) {
      for (const CellCoord& o : sh[static_cast<std::size_t>(r)]) {
        CellCoord n = q;
        for (std::size_t i = 0; i + 1 < dims; ++i) n[i] = ((n[i] + o[i]) % P + P) % P;
        n[dims - 1] += o[dims - 1];
        if (n[dims - 1] < 0 || n[dims - 1] >= F) continue;
        if (b.contains(b.encode(n))) {
          found = r;
          break;
        }
      }
    }
    if (found > cap) return cap + 1;
    worst = std::max(worst, found);
  }
  return worst;
}

void check_same(const GridSet& a, const GridSet& b) {
  if (!(a.geometry() == b.geometry()))
    throw UsageError("truncated Fell distance needs matching R, h and dimension");
}

}  // namespace

double directed_distance(const GridSet& a, const GridSet& b) {
  check_same(a, b);
  return static_cast<double>(directed_cells(a, b)) * a.geometry().h();
}

double truncated_fell_distance(const GridSet& a, const GridSet& b) {
  check_same(a, b);
  if (a.cells() == b.cells()) return 0.0;
  std::int64_t d = std::max(directed_cells(a, b), directed_cells(b, a));
  return static_cast<double>(d) * a.geometry().h();
}

std::optional<double> distance_within(const GridSet& a, const GridSet& b,
                                      double cap) {
  check_same(a, b);
  const double h = a.geometry().h();
  if (!(cap >= 0.0)) throw UsageError("distance cap must be >= 0");
  const auto cells = static_cast<std::int64_t>(std::floor(cap / h + 1e-9));
  std::int64_t d;
  if (a.cells() == b.cells()) {
    d = 0;
  } else if (cells <= 2) {
    d = bounded_cells(a, b, cells);
    if (d <= cells) d = std::max(d, bounded_cells(b, a, cells));
  } else {
    d = std::max(directed_cells(a, b), directed_cells(b, a));
  }
  if (d > cells) return std::nullopt;
  return static_cast<double>(d) * h;
}

}  // namespace skewlab
