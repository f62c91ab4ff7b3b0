#include "skewlab/gridset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "skewlab/errors.hpp"

namespace skewlab {

std::int64_t GridGeometry::fiber_cells() const {
  return static_cast<std::int64_t>(std::llround(2.0 * radius * cells_per_unit));
}

std::uint64_t GridGeometry::torus_cells() const {
  std::uint64_t t = 1;
  for (std::uint32_t i = 0; i < torus_dims; ++i) t *= cells_per_unit;
  return t;
}

GridGeometry make_geometry(double radius, double h, std::size_t torus_dims) {
  if (!(radius > 0.0) || !(h > 0.0) || !std::isfinite(radius))
    throw UsageError("grid needs R > 0 and h > 0");
  double n = 1.0 / h;
  if (std::fabs(n - std::round(n)) > 1e-9 || n < 1.0 || n > 1 << 20)
    throw UsageError("grid resolution h must be 1/n for an integer n");
  double f = 2.0 * radius * std::round(n);
  if (std::fabs(f - std::round(f)) > 1e-9)
    throw UsageError("2R/h must be an integer");
  if (torus_dims == 0 || torus_dims > kMaxTorusDim)
    throw UsageError("grid torus dimension must be in 1..4");
  GridGeometry g;
  g.radius = radius;
  g.cells_per_unit = static_cast<std::uint32_t>(std::lround(n));
  g.torus_dims = static_cast<std::uint32_t>(torus_dims);
  long double total = std::pow(static_cast<long double>(g.cells_per_unit),
                               static_cast<long double>(torus_dims)) *
                      static_cast<long double>(g.fiber_cells());
  if (total >= 1.8e19L) throw UsageError("grid has too many cells");
  return g;
}

GridSet::GridSet(GridGeometry geometry, std::vector<std::uint64_t> cells,
                 std::uint32_t dilations)
    : geom_(geometry), cells_(std::move(cells)), dilations_(dilations) {
  if (cells_.empty()) throw EmptySetError("grid set is empty");
  if (!std::is_sorted(cells_.begin(), cells_.end())) std::sort(cells_.begin(), cells_.end());
  cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
}

bool GridSet::contains(std::uint64_t cell) const {
  return std::binary_search(cells_.begin(), cells_.end(), cell);
}

CellCoord GridSet::decode(std::uint64_t cell) const {
  CellCoord c{};
  const std::uint64_t F = static_cast<std::uint64_t>(geom_.fiber_cells());
  const std::uint64_t n = geom_.cells_per_unit;
  c[geom_.torus_dims] = static_cast<std::int64_t>(cell % F);
  cell /= F;
  for (std::int64_t i = static_cast<std::int64_t>(geom_.torus_dims) - 1; i >= 0; --i) {
    c[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(cell % n);
    cell /= n;
  }
  return c;
}

std::uint64_t GridSet::encode(const CellCoord& c) const {
  std::uint64_t idx = 0;
  for (std::uint32_t i = 0; i < geom_.torus_dims; ++i)
    idx = idx * geom_.cells_per_unit + static_cast<std::uint64_t>(c[i]);
  return idx * static_cast<std::uint64_t>(geom_.fiber_cells()) +
         static_cast<std::uint64_t>(c[geom_.torus_dims]);
}

namespace {

// Stride of coordinate `dim` in the linear index.
std::uint64_t stride(const GridGeometry& g, std::uint32_t dim) {
  std::uint64_t s = static_cast<std::uint64_t>(g.fiber_cells());
  if (dim == g.torus_dims) return 1;
  for (std::uint32_t i = dim + 1; i < g.torus_dims; ++i) s *= g.cells_per_unit;
  return s;
}

std::int64_t coord_of(const GridGeometry& g, std::uint64_t cell, std::uint32_t dim) {
  std::uint64_t s = stride(g, dim);
  std::uint64_t mod = dim == g.torus_dims ? static_cast<std::uint64_t>(g.fiber_cells())
                                          : g.cells_per_unit;
  return static_cast<std::int64_t>((cell / s) % mod);
}

// Neighbor of `cell` by +-1 along `dim`; false when it leaves the window.
bool step(const GridGeometry& g, std::uint64_t cell, std::uint32_t dim, int dir,
          std::uint64_t* out) {
  std::int64_t c = coord_of(g, cell, dim);
  std::uint64_t s = stride(g, dim);
  if (dim == g.torus_dims) {
    std::int64_t nc = c + dir;
    if (nc < 0 || nc >= g.fiber_cells()) return false;
    *out = dir > 0 ? cell + s : cell - s;
    return true;
  }
  std::int64_t n = g.cells_per_unit;
  std::int64_t nc = (c + dir + n) % n;
  *out = cell + static_cast<std::uint64_t>(nc - c) * s;  // wraps correctly
  return true;
}

}  // namespace

GridSet GridSet::dilated() const {
  // The Chebyshev ball is a product of intervals, so dilate one axis at a time.
  std::vector<std::uint64_t> cur = cells_;
  for (std::uint32_t dim = 0; dim <= geom_.torus_dims; ++dim) {
    std::vector<std::uint64_t> next;
    next.reserve(cur.size() * 3);
    for (std::uint64_t c : cur) {
      next.push_back(c);
      std::uint64_t nb;
      if (step(geom_, c, dim, +1, &nb)) next.push_back(nb);
      if (step(geom_, c, dim, -1, &nb)) next.push_back(nb);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    cur = std::move(next);
  }
  return GridSet(geom_, std::move(cur), dilations_ + 1);
}

std::vector<std::uint64_t> GridSet::eroded_cells() const {
  std::vector<std::uint64_t> cur = cells_;
  for (std::uint32_t dim = 0; dim <= geom_.torus_dims && !cur.empty(); ++dim) {
    std::vector<std::uint64_t> next;
    next.reserve(cur.size());
    for (std::uint64_t c : cur) {
      bool keep = true;
      for (int dir : {-1, +1}) {
        std::uint64_t nb;
        if (step(geom_, c, dim, dir, &nb) &&
            !std::binary_search(cur.begin(), cur.end(), nb)) {
          keep = false;
          break;
        }
      }
      if (keep) next.push_back(c);
    }
    cur = std::move(next);
  }
  return cur;
}

GridSet GridSet::fiber_shifted(std::int64_t shift) const {
  std::vector<std::uint64_t> out;
  out.reserve(cells_.size());
  const std::int64_t F = geom_.fiber_cells();
  for (std::uint64_t c : cells_) {
    std::int64_t f = static_cast<std::int64_t>(c % static_cast<std::uint64_t>(F)) + shift;
    if (f < 0 || f >= F) continue;
    out.push_back(static_cast<std::uint64_t>(static_cast<std::int64_t>(c) + shift));
  }
  if (out.empty()) throw EmptySetError("fiber shift leaves the window");
  return GridSet(geom_, std::move(out), dilations_);
}

GridSet GridSet::cropped(double radius) const {
  GridGeometry g = make_geometry(radius, geom_.h(), geom_.torus_dims);
  if (g.fiber_cells() > geom_.fiber_cells())
    throw UsageError("crop radius exceeds the grid radius");
  const std::int64_t F = geom_.fiber_cells(), G = g.fiber_cells();
  const std::int64_t off = (F - G) / 2;
  std::vector<std::uint64_t> out;
  out.reserve(cells_.size());
  for (std::uint64_t c : cells_) {
    std::int64_t f = static_cast<std::int64_t>(c % static_cast<std::uint64_t>(F)) - off;
    if (f < 0 || f >= G) continue;
    std::uint64_t torus = c / static_cast<std::uint64_t>(F);
    out.push_back(torus * static_cast<std::uint64_t>(G) + static_cast<std::uint64_t>(f));
  }
  if (out.empty()) throw EmptySetError("crop leaves nothing");
  return GridSet(g, std::move(out), dilations_);
}

GridSet set_union(const GridSet& a, const GridSet& b) {
  if (!(a.geometry() == b.geometry())) throw UsageError("grid geometry mismatch");
  std::vector<std::uint64_t> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.cells().begin(), a.cells().end(), b.cells().begin(),
                 b.cells().end(), std::back_inserter(out));
  return GridSet(a.geometry(), std::move(out), std::max(a.dilations(), b.dilations()));
}

GridSet set_intersection(const GridSet& a, const GridSet& b) {
  if (!(a.geometry() == b.geometry())) throw UsageError("grid geometry mismatch");
  std::vector<std::uint64_t> out;
  std::set_intersection(a.cells().begin(), a.cells().end(), b.cells().begin(),
                        b.cells().end(), std::back_inserter(out));
  if (out.empty()) throw EmptySetError("intersection is empty");
  return GridSet(a.geometry(), std::move(out), std::max(a.dilations(), b.dilations()));
}

bool intersects(const std::vector<std::uint64_t>& a,
                const std::vector<std::uint64_t>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return false;
}

GridBuilder::GridBuilder(GridGeometry geometry) : geom_(geometry) {
  slots_.assign(1 << 16, ~std::uint64_t{0});
  mask_ = slots_.size() - 1;
}

void GridBuilder::grow() {
  std::vector<std::uint64_t> old;
  old.swap(slots_);
  slots_.assign(old.size() * 2, ~std::uint64_t{0});
  mask_ = slots_.size() - 1;
  count_ = 0;
  for (std::uint64_t c : old)
    if (c != ~std::uint64_t{0}) add_cell(c);
}

bool GridBuilder::add_cell(std::uint64_t cell) {
  std::uint64_t h = (cell * 0x9e3779b97f4a7c15ULL) >> 17;
  for (std::uint64_t i = h & mask_;; i = (i + 1) & mask_) {
    if (slots_[i] == cell) return false;
    if (slots_[i] == ~std::uint64_t{0}) {
      slots_[i] = cell;
      if (++count_ * 2 > slots_.size()) grow();
      return true;
    }
  }
}

bool GridBuilder::add(const Turn* coords, double a) {
  double f = std::floor((a + geom_.radius) * geom_.cells_per_unit);
  if (!(f >= 0.0) || f >= static_cast<double>(geom_.fiber_cells())) return false;
  std::uint64_t idx = 0;
  for (std::uint32_t i = 0; i < geom_.torus_dims; ++i) {
    unsigned __int128 pos =
        static_cast<unsigned __int128>(coords[i].raw()) * geom_.cells_per_unit;
    idx = idx * geom_.cells_per_unit + static_cast<std::uint64_t>(pos >> 64);
  }
  idx = idx * static_cast<std::uint64_t>(geom_.fiber_cells()) + static_cast<std::uint64_t>(f);
  return add_cell(idx);
}

GridSet GridBuilder::build(std::uint32_t dilations) const {
  std::vector<std::uint64_t> cells;
  cells.reserve(count_);
  for (std::uint64_t c : slots_)
    if (c != ~std::uint64_t{0}) cells.push_back(c);
  if (cells.empty()) throw EmptySetError("orbit never entered the window (R too small?)");
  std::sort(cells.begin(), cells.end());
  return GridSet(geom_, std::move(cells), dilations);
}

namespace {

constexpr char kMagic[4] = {'S', 'K', 'G', 'S'};
constexpr std::uint32_t kDumpVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "little-endian host expected");
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
    throw UsageError("grid dump truncated");
  return v;
}

}  // namespace

void write_gridset(std::ostream& os, const GridSet& s) {
  const GridGeometry& g = s.geometry();
  long double total = static_cast<long double>(g.torus_cells()) *
                      static_cast<long double>(g.fiber_cells());
  bool packed = total / 8.0L <= static_cast<long double>(s.size()) * 8.0L;
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kDumpVersion);
  put<double>(os, g.radius);
  put<double>(os, g.h());
  put<std::uint32_t>(os, g.torus_dims);
  put<std::uint32_t>(os, s.dilations());
  put<std::uint32_t>(os, packed ? 0 : 1);
  put<std::uint64_t>(os, s.size());
  if (packed) {
    std::uint64_t bytes = (static_cast<std::uint64_t>(total) + 7) / 8;
    std::vector<unsigned char> bits(bytes, 0);
    for (std::uint64_t c : s.cells()) bits[c >> 3] |= static_cast<unsigned char>(1u << (c & 7));
    os.write(reinterpret_cast<const char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
  } else {
    for (std::uint64_t c : s.cells()) put<std::uint64_t>(os, c);
  }
}

GridSet read_gridset(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw UsageError("not a grid dump");
  if (get<std::uint32_t>(is) != kDumpVersion) throw UsageError("unknown grid dump version");
  double R = get<double>(is);
  double h = get<double>(is);
  std::uint32_t dims = get<std::uint32_t>(is);
  std::uint32_t dil = get<std::uint32_t>(is);
  std::uint32_t format = get<std::uint32_t>(is);
  std::uint64_t count = get<std::uint64_t>(is);
  GridGeometry g = make_geometry(R, h, dims);
  std::vector<std::uint64_t> cells;
  cells.reserve(count);
  if (format == 0) {
    std::uint64_t total = g.torus_cells() * static_cast<std::uint64_t>(g.fiber_cells());
    std::vector<unsigned char> bits((total + 7) / 8);
    if (!is.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(bits.size())))
      throw UsageError("grid dump truncated");
    for (std::uint64_t i = 0; i < total; ++i)
      if (bits[i >> 3] & (1u << (i & 7))) cells.push_back(i);
  } else if (format == 1) {
    for (std::uint64_t i = 0; i < count; ++i) cells.push_back(get<std::uint64_t>(is));
  } else {
    throw UsageError("unknown grid dump format");
  }
  if (cells.size() != count) throw UsageError("grid dump count mismatch");
  return GridSet(g, std::move(cells), dil);
}

std::string gridset_summary_header() {
  return "R,h,torus_dims,dilations,cells,fiber_min,fiber_max";
}

std::string gridset_summary_row(const GridSet& s) {
  const GridGeometry& g = s.geometry();
  std::int64_t lo = g.fiber_cells(), hi = -1;
  for (std::uint64_t c : s.cells()) {
    std::int64_t f = static_cast<std::int64_t>(c % static_cast<std::uint64_t>(g.fiber_cells()));
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  std::ostringstream os;
  os.precision(17);
  os << g.radius << ',' << g.h() << ',' << g.torus_dims << ',' << s.dilations() << ','
     << s.size() << ',' << (static_cast<double>(lo) * g.h() - g.radius) << ','
     << (static_cast<double>(hi + 1) * g.h() - g.radius);
  return os.str();
}

}  // namespace skewlab
