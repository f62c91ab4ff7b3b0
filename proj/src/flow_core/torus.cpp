#include "skewlab/torus.hpp"

#include <cmath>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {
constexpr long double kTwo64 = 18446744073709551616.0L;
}

Turn Turn::from_long_double(long double turns) {
  long double f = turns - std::floor(turns);
  if (!(f < 1.0L)) f = 0.0L;  // -tiny rounds to 1
  if (!(f >= 0.0L)) throw UsageError("non-finite angle");
  long double scaled = f * kTwo64;
  if (scaled >= kTwo64) return Turn(0);
  return Turn(static_cast<std::uint64_t>(scaled));
}

Turn Turn::from_double(double turns) {
  if (!std::isfinite(turns)) throw UsageError("non-finite angle");
  return from_long_double(static_cast<long double>(turns));
}

double Turn::to_double() const {
  return static_cast<double>(raw_ >> 11) * 0x1p-53;
}

long double Turn::to_long_double() const {
  return static_cast<long double>(raw_) / kTwo64;
}

double Turn::to_signed() const {
  return static_cast<double>(static_cast<std::int64_t>(raw_)) * 0x1p-64;
}

double circle_distance(Turn a, Turn b) {
  return std::fabs((a - b).to_signed());
}

TorusPoint::TorusPoint(std::size_t dim) : dim_(dim) {
  if (dim == 0 || dim > kMaxTorusDim)
    throw UsageError("torus dimension must be in 1.." +
                     std::to_string(kMaxTorusDim));
}

TorusPoint::TorusPoint(std::initializer_list<double> coords)
    : TorusPoint(coords.size()) {
  std::size_t i = 0;
  for (double c : coords) c_[i++] = Turn::from_double(c);
}

TorusPoint TorusPoint::from_doubles(std::span<const double> coords) {
  TorusPoint p(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i)
    p.c_[i] = Turn::from_double(coords[i]);
  return p;
}

TorusPoint TorusPoint::from_turns(std::span<const Turn> coords) {
  TorusPoint p(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) p.c_[i] = coords[i];
  return p;
}

std::vector<double> TorusPoint::to_doubles() const {
  std::vector<double> out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = c_[i].to_double();
  return out;
}

bool TorusPoint::operator==(const TorusPoint& o) const {
  if (dim_ != o.dim_) return false;
  for (std::size_t i = 0; i < dim_; ++i)
    if (c_[i] != o.c_[i]) return false;
  return true;
}

double distance(const TorusPoint& a, const TorusPoint& b) {
  if (a.dim() != b.dim())
    throw UsageError("distance: dimension mismatch (" +
                     std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()) + ")");
  double d = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    d = std::max(d, circle_distance(a[i], b[i]));
  return d;
}

Turn pairing(std::span<const std::int64_t> k, const TorusPoint& x) {
  if (k.size() != x.dim())
    throw UsageError("frequency vector does not match torus dimension");
  Turn s;
  for (std::size_t i = 0; i < k.size(); ++i) s += x[i].times(k[i]);
  return s;
}

}  // namespace skewlab
