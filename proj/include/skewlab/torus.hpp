#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace skewlab {

// An angle on the circle R/Z held as raw/2^64. Addition wraps, so the
// Z-action of a rotation is exact.
class Turn {
 public:
  constexpr Turn() = default;
  constexpr explicit Turn(std::uint64_t raw) : raw_(raw) {}

  static Turn from_double(double turns);
  static Turn from_long_double(long double turns);

  constexpr std::uint64_t raw() const { return raw_; }
  // In [0, 1). Truncates to 53 bits so the result never rounds up to 1.
  double to_double() const;
  long double to_long_double() const;
  // Representative in [-1/2, 1/2).
  double to_signed() const;

  constexpr Turn operator+(Turn o) const { return Turn(raw_ + o.raw_); }
  constexpr Turn operator-(Turn o) const { return Turn(raw_ - o.raw_); }
  constexpr Turn operator-() const { return Turn(0 - raw_); }
  constexpr Turn& operator+=(Turn o) {
    raw_ += o.raw_;
    return *this;
  }
  constexpr Turn& operator-=(Turn o) {
    raw_ -= o.raw_;
    return *this;
  }
  // k * t mod 1, exact.
  constexpr Turn times(std::int64_t k) const {
    return Turn(static_cast<std::uint64_t>(k) * raw_);
  }
  constexpr bool operator==(const Turn&) const = default;

 private:
  std::uint64_t raw_ = 0;
};

// Distance on R/Z, in [0, 1/2].
double circle_distance(Turn a, Turn b);

inline constexpr std::size_t kMaxTorusDim = 4;

class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::size_t dim);
  TorusPoint(std::initializer_list<double> coords);
  static TorusPoint from_doubles(std::span<const double> coords);
  static TorusPoint from_turns(std::span<const Turn> coords);

  std::size_t dim() const { return dim_; }
  Turn& operator[](std::size_t i) { return c_[i]; }
  Turn operator[](std::size_t i) const { return c_[i]; }
  std::vector<double> to_doubles() const;

  bool operator==(const TorusPoint& o) const;

 private:
  std::array<Turn, kMaxTorusDim> c_{};
  std::size_t dim_ = 0;
};

// Max over coordinates of the circle distance. Throws UsageError when the
// dimensions differ.
double distance(const TorusPoint& a, const TorusPoint& b);

// Sum_i k_i * x_i mod 1.
Turn pairing(std::span<const std::int64_t> k, const TorusPoint& x);

}  // namespace skewlab
