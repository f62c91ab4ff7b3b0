#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "skewlab/base_system.hpp"

namespace skewlab {

// amplitude * cos(2 pi (k.x + phase)).
struct TrigTerm {
  std::vector<std::int64_t> freq;
  double amplitude = 0.0;
  double phase = 0.0;
};

enum class CocycleMode {
  GeneratorFunction,  // f(n,x) = sum_{k<n} f(T^k x) over a rotation
  FlowGenerator,      // h(t,m) = int_0^t A(phi^s m) ds over a linear flow
};

// Generator = drift + sum of terms. A drift is the only way to express a
// constant part, since terms must have a nonzero frequency.
struct CocycleSpec {
  BaseSystem base;
  CocycleMode mode = CocycleMode::GeneratorFunction;
  std::vector<TrigTerm> terms;
  double drift = 0.0;
};

class Cocycle {
 public:
  virtual ~Cocycle() = default;
  virtual const BaseSystem& base() const = 0;
  // f(t, x). Throws UsageError on a time type or dimension mismatch.
  virtual double evaluate(const Time& t, const TorusPoint& x) const = 0;
  // f(1, x) for rotations, A(x) for flows.
  virtual double generator(const TorusPoint& x) const = 0;
};

using CocyclePtr = std::shared_ptr<const Cocycle>;

// Certificate bound on sum |amplitude| of a fiber perturbation.
inline constexpr double kPerturbationBound = 0.25;

class TrigCocycle final : public Cocycle {
 public:
  // Throws UsageError for a zero frequency, a frequency of the wrong
  // dimension, a mode that does not match the base, non-finite
  // coefficients, or k.v = 0 for a flow term.
  explicit TrigCocycle(CocycleSpec spec);

  const BaseSystem& base() const override { return spec_.base; }
  double evaluate(const Time& t, const TorusPoint& x) const override;
  double generator(const TorusPoint& x) const override;

  const CocycleSpec& spec() const { return spec_; }
  // Sum of |amplitude|, a bound for sup |generator - drift|.
  double amplitude_sum() const;

 private:
  struct Prepared {
    Turn psi;            // k.alpha for rotations
    double e1_re = 0.0;  // e^{2 pi i psi} - 1
    double e1_im = 0.0;
    long double kv = 0;  // k.v for flows
    Turn phase;
  };

  double evaluate_discrete(std::int64_t n, const TorusPoint& x) const;
  double evaluate_flow(double t, const TorusPoint& x) const;

  CocycleSpec spec_;
  std::vector<Prepared> prep_;
};

std::shared_ptr<const TrigCocycle> make_cocycle(CocycleSpec spec);

struct IdentityCheck {
  double max_residual = 0.0;
  Time tau{std::int64_t{0}};
  Time tau2{std::int64_t{0}};
  TorusPoint x;
};

// Max over random (tau, tau', x) of |f(tau, tau' x) + f(tau', x) -
// f(tau + tau', x)|. Integer times are drawn from [-2^20, 2^20], real times
// from [-1000, 1000].
IdentityCheck check_identity(const Cocycle& f, std::size_t samples,
                             std::uint64_t seed);

// Periodic table on a uniform grid of n cells per coordinate, read by
// multilinear interpolation. Normalized so that b(anchor) = 0.
class TransferTable {
 public:
  TransferTable() = default;
  TransferTable(std::size_t dim, std::size_t cells_per_unit,
                std::vector<double> values, TorusPoint anchor);

  template <class F>
  static TransferTable tabulate(std::size_t dim, std::size_t cells_per_unit,
                                F&& fn, TorusPoint anchor);

  double operator()(const TorusPoint& x) const;
  std::size_t dim() const { return dim_; }
  std::size_t cells_per_unit() const { return n_; }
  double step() const { return 1.0 / static_cast<double>(n_); }
  const std::vector<double>& values() const { return values_; }
  const TorusPoint& anchor() const { return anchor_; }
  TorusPoint node(std::size_t index) const;

 private:
  double raw(const TorusPoint& x) const;

  std::size_t dim_ = 0;
  std::size_t n_ = 0;
  std::vector<double> values_;
  TorusPoint anchor_;
};

inline constexpr std::size_t kDefaultTransferCells = 4096;  // h = 2^-12

// g(t, x) = f(t, x) + b(t.x) - b(x).
class ShiftedCocycle final : public Cocycle {
 public:
  ShiftedCocycle(CocyclePtr f, TransferTable b);
  const BaseSystem& base() const override { return f_->base(); }
  double evaluate(const Time& t, const TorusPoint& x) const override;
  double generator(const TorusPoint& x) const override;
  const TransferTable& transfer() const { return b_; }

 private:
  CocyclePtr f_;
  TransferTable b_;
};

CocyclePtr cohomologous_shift(CocyclePtr f, TransferTable b);

template <class F>
TransferTable TransferTable::tabulate(std::size_t dim,
                                      std::size_t cells_per_unit, F&& fn,
                                      TorusPoint anchor) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= cells_per_unit;
  TransferTable shape(dim, cells_per_unit, std::vector<double>(total, 0.0),
                      anchor);
  std::vector<double> v(total);
  for (std::size_t i = 0; i < total; ++i) v[i] = fn(shape.node(i));
  return TransferTable(dim, cells_per_unit, std::move(v), std::move(anchor));
}

}  // namespace skewlab
