#include <cmath>

#include "skewlab/cocycle.hpp"
#include "skewlab/errors.hpp"

namespace skewlab {

TransferTable::TransferTable(std::size_t dim, std::size_t cells_per_unit,
                             std::vector<double> values, TorusPoint anchor)
    : dim_(dim), n_(cells_per_unit), values_(std::move(values)),
      anchor_(std::move(anchor)) {
  if (dim == 0 || dim > kMaxTorusDim)
    throw UsageError("transfer table dimension must be in 1..4");
  if (n_ < 2) throw UsageError("transfer table needs at least 2 cells");
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= n_;
  if (values_.size() != total)
    throw UsageError("transfer table has the wrong number of values");
  if (anchor_.dim() != dim) throw UsageError("anchor dimension mismatch");
  double offset = raw(anchor_);
  for (double& v : values_) v -= offset;
}

TorusPoint TransferTable::node(std::size_t index) const {
  TorusPoint p(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    std::size_t c = index % n_;
    index /= n_;
    p[i] = Turn::from_double(static_cast<double>(c) / static_cast<double>(n_));
  }
  return p;
}

double TransferTable::raw(const TorusPoint& x) const {
  if (x.dim() != dim_) throw UsageError("transfer table: dimension mismatch");
  std::size_t lo[kMaxTorusDim];
  double w[kMaxTorusDim];
  for (std::size_t i = 0; i < dim_; ++i) {
    unsigned __int128 pos = static_cast<unsigned __int128>(x[i].raw()) * n_;
    lo[i] = static_cast<std::size_t>(pos >> 64);
    w[i] = static_cast<double>(static_cast<std::uint64_t>(pos)) * 0x1p-64;
  }
  double acc = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << dim_); ++corner) {
    double weight = 1.0;
    std::size_t index = 0, stride = 1;
    for (std::size_t i = 0; i < dim_; ++i) {
      bool up = (corner >> i) & 1;
      weight *= up ? w[i] : 1.0 - w[i];
      index += ((lo[i] + (up ? 1 : 0)) % n_) * stride;
      stride *= n_;
    }
    if (weight != 0.0) acc += weight * values_[index];
  }
  return acc;
}

double TransferTable::operator()(const TorusPoint& x) const { return raw(x); }

ShiftedCocycle::ShiftedCocycle(CocyclePtr f, TransferTable b)
    : f_(std::move(f)), b_(std::move(b)) {
  if (!f_) throw UsageError("shift of a null cocycle");
  if (b_.dim() != f_->base().dim())
    throw UsageError("transfer table dimension does not match the base");
}

double ShiftedCocycle::evaluate(const Time& t, const TorusPoint& x) const {
  return f_->evaluate(t, x) + b_(base().act(t, x)) - b_(x);
}

double ShiftedCocycle::generator(const TorusPoint& x) const {
  if (base().discrete()) return evaluate(Time{std::int64_t{1}}, x);
  // A + (b(phi^s x) - b(x))/s, one-sided difference at s = 2^-20.
  const double s = 0x1p-20;
  return f_->generator(x) + (b_(base().act(s, x)) - b_(x)) / s;
}

CocyclePtr cohomologous_shift(CocyclePtr f, TransferTable b) {
  return std::make_shared<const ShiftedCocycle>(std::move(f), std::move(b));
}

}  // namespace skewlab
