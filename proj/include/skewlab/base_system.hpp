#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "skewlab/torus.hpp"

namespace skewlab {

// Integer time for rotations, real time for flows.
using Time = std::variant<std::int64_t, double>;

bool is_discrete(const Time& t);
std::string describe(const Time& t);

struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 0;
};

enum class BaseKind { DiscreteRotation, LinearFlow };

class BaseSystem {
 public:
  BaseSystem() = default;

  static BaseSystem rotation(std::vector<Turn> alpha, std::string provenance,
                             std::vector<Convergent> convergents = {});
  // direction[0] must be 1 when convergents are supplied; they approximate
  // direction[1].
  static BaseSystem linear_flow(std::vector<long double> direction,
                                std::string provenance,
                                std::vector<Convergent> convergents = {});

  BaseKind kind() const { return kind_; }
  bool discrete() const { return kind_ == BaseKind::DiscreteRotation; }
  std::size_t dim() const { return dim_; }
  const std::vector<Turn>& rotation_vector() const { return alpha_; }
  const std::vector<long double>& direction() const { return direction_; }
  const std::vector<Convergent>& convergents() const { return convergents_; }
  const std::string& provenance() const { return provenance_; }

  // Throws UsageError on a time type or dimension mismatch.
  TorusPoint act(const Time& t, const TorusPoint& x) const;
  TorusPoint act(std::int64_t n, const TorusPoint& x) const;
  TorusPoint act(double t, const TorusPoint& x) const;

  // Translation vector of time t, as turns.
  TorusPoint displacement(const Time& t) const;

  void check_time(const Time& t) const;
  void check_point(const TorusPoint& x) const;

 private:
  BaseKind kind_ = BaseKind::DiscreteRotation;
  std::size_t dim_ = 0;
  std::vector<Turn> alpha_;
  std::vector<long double> direction_;
  std::vector<Convergent> convergents_;
  std::string provenance_;
};

// Convergents p/q of raw/2^64 with 1 <= q <= max_q, starting at q = 1.
std::vector<Convergent> turn_convergents(Turn alpha, std::int64_t max_q);
// Convergents of a positive real with q <= max_q, starting at q = 1.
std::vector<Convergent> real_convergents(long double x, std::int64_t max_q);

// Largest distance from a point of the circle to the sample set.
double covering_radius_1d(std::vector<Turn> pts);

}  // namespace skewlab
