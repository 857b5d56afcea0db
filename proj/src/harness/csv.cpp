#include "sqn/harness/csv.hpp"

#include <ostream>

#include "sqn/errors.hpp"
#include "sqn/numerics/format.hpp"

namespace sqn {

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "t,funcs,rel_dist,objective\n";
  for (const auto& r : trace) out << r.t << ',' << r.funcs << ',' << fmt17(r.rel_dist) << ',' << fmt17(r.objective) << '\n';
}

void write_summary_csv(std::ostream& out, const ExperimentSummary& summary) {
  out << "trial,seed,optimizer,tau,converged,final_rel_dist,final_objective\n";
  for (const auto& rec : summary.records) {
    out << rec.trial << ',' << rec.seed << ',' << rec.optimizer << ',' << rec.result.tau_metric << ','
        << (rec.result.converged ? 1 : 0) << ',' << fmt17(rec.result.final_rel_dist) << ','
        << fmt17(rec.result.final_objective) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const std::vector<double>& edges, const std::vector<std::size_t>& counts) {
  if (edges.size() != counts.size() + 1) throw DimensionError("write_histogram_csv: need one more edge than bins");
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < counts.size(); ++i)
    out << fmt17(edges[i]) << ',' << fmt17(edges[i + 1]) << ',' << counts[i] << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<double>& values,
                     const std::vector<ExperimentSummary>& summaries) {
  if (values.size() != summaries.size()) throw DimensionError("write_sweep_csv: one summary per value expected");
  out << "axis_value,optimizer,mean_tau,std_tau,median_tau,failures\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (const auto& m : summaries[i].methods) {
      out << fmt17(values[i]) << ',' << m.label << ',' << fmt17(m.mean_tau) << ',' << fmt17(m.std_tau) << ','
          << fmt17(m.median_tau) << ',' << m.failures << '\n';
    }
  }
}

}  // namespace sqn
