#include <charconv>
#include <ostream>

#include "skewlab/analysis.hpp"

namespace skewlab {

std::string format_double(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format_point(const TorusPoint& x) {
  std::string out;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (i) out += ';';
    out += format_double(x[i].to_double());
  }
  return out;
}

std::string point_columns(const SkewPoint& p) {
  return format_point(p.x) + ',' + (p.m ? format_point(*p.m) : std::string()) + ',' +
         format_double(p.a);
}

namespace {

std::string witness_row(const Witness& w) {
  return describe(w.tau) + ',' + point_columns(w.p) + ',' + format_double(w.increment) + ',' +
         format_double(w.displacement);
}

const char* kWitnessColumns = "tau,x,m,a,increment,displacement";

}  // namespace

void write_report(std::ostream& os, const RecurrenceVerdict& r) {
  os << "report=recurrence\n"
     << "verdict=" << to_string(r.verdict) << '\n'
     << "budget_used=" << r.budget_used << '\n';
  for (std::size_t i = 0; i < r.scales.size(); ++i) {
    const auto& s = r.scales[i];
    os << "scale" << i << ".eps=" << format_double(s.eps) << '\n'
       << "scale" << i << ".witnesses=" << s.count << '\n'
       << "scale" << i << ".large_lag_steps=" << s.large_lag_steps << '\n';
  }
  os << "\nkind,scale,sign,block,t0,min_abs_a," << kWitnessColumns << '\n';
  for (std::size_t i = 0; i < r.scales.size(); ++i) {
    const auto& s = r.scales[i];
    for (const auto* w : {&s.positive, &s.negative})
      if (*w)
        os << "witness," << format_double(s.eps) << ',' << (w == &s.positive ? "+" : "-")
           << ",,,," << witness_row(**w) << '\n';
  }
  for (const auto& p : r.profile)
    for (std::size_t j = 0; j < p.block_min.size(); ++j)
      os << "escape," << p.start << ',' << (p.direction > 0 ? "+" : "-") << ',' << j << ','
         << format_double(p.block_start[j]) << ',' << format_double(p.block_min[j])
         << ",,,,,,\n";
}

void write_report(std::ostream& os, const EssentialRangeReport& r) {
  os << "report=essential-range\n"
     << "window=" << format_double(r.options.window) << '\n'
     << "delta=" << format_double(r.options.delta) << '\n'
     << "eps=" << format_double(r.options.eps) << '\n'
     << "budget=" << r.options.budget << '\n'
     << "budget_used=" << r.budget_used << '\n'
     << "lags=" << r.lags << '\n'
     << "lag_limit=" << r.lag_limit << '\n'
     << "resolution_schedule=fixed delta bins, witness within delta/2\n"
     << "candidates=" << r.candidates.size() << '\n'
     << "symmetric=" << (r.symmetric() ? "true" : "false") << '\n'
     << "\nvalue," << kWitnessColumns << '\n';
  for (const auto& c : r.candidates) os << format_double(c.value) << ',' << witness_row(c.witness) << '\n';
}

void write_report(std::ostream& os, const GapScanResult& r) {
  os << "report=gap-scan\n"
     << "kappa=" << format_double(r.options.kappa) << '\n'
     << "eps=" << format_double(r.options.eps) << '\n'
     << "budget=" << r.options.budget << '\n'
     << "budget_used=" << r.budget_used << '\n'
     << "result=" << (r.clean ? "Clean" : "Violation") << '\n'
     << '\n' << kWitnessColumns << '\n';
  if (r.violation) os << witness_row(*r.violation) << '\n';
}

void write_report(std::ostream& os, const GHResult& r) {
  os << "report=coboundary\n"
     << "result=" << (r.coboundary ? "Coboundary" : "NotCoboundary") << '\n'
     << "steps=" << r.steps << '\n'
     << "h=" << format_double(r.h) << '\n'
     << "tolerance=" << format_double(r.tolerance) << '\n'
     << "early_max=" << format_double(r.early_max) << '\n'
     << "overall_max=" << format_double(r.overall_max) << '\n';
  if (r.coboundary) {
    os << "residual=" << format_double(r.residual) << '\n'
       << "anchor=" << format_point(r.table.anchor()) << '\n'
       << "\nx,b\n";
    for (std::size_t i = 0; i < r.table.values().size(); ++i)
      os << format_point(r.table.node(i)) << ',' << format_double(r.table.values()[i]) << '\n';
  } else {
    os << "\ntau,x,value,displacement\n"
       << describe(r.witness.tau) << ',' << format_point(r.witness.x) << ','
       << format_double(r.witness.value) << ',' << format_double(r.witness.displacement) << '\n';
  }
}

void write_report(std::ostream& os, const TrivialityReport& r) {
  os << "report=relative-triviality\n"
     << "budget_used=" << r.budget_used << '\n'
     << "start=" << point_columns(r.start) << '\n'
     << "\neps,witnesses,max_abs_f2,tau,index,x,m,a,f1,displacement\n";
  for (const auto& row : r.rows) {
    os << format_double(row.eps) << ',' << row.witnesses << ',';
    if (row.no_data) {
      os << "no-data,,,,,,,\n";
      continue;
    }
    os << format_double(row.max_f2) << ',' << row.tau << ',' << row.index << ','
       << point_columns(row.p) << ',' << format_double(row.f1) << ','
       << format_double(row.displacement) << '\n';
  }
}

void write_transfer_csv(std::ostream& os, const TransferTable& t) {
  os << "x,b\n";
  for (std::size_t i = 0; i < t.values().size(); ++i)
    os << format_point(t.node(i)) << ',' << format_double(t.values()[i]) << '\n';
}

}  // namespace skewlab
