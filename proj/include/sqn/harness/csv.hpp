#pragma once

#include <iosfwd>
#include <vector>

#include "sqn/harness/experiment.hpp"

namespace sqn {

/// t,funcs,rel_dist,objective
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

/// trial,seed,optimizer,tau,converged,final_rel_dist,final_objective
void write_summary_csv(std::ostream& out, const ExperimentSummary& summary);

/// bin_lo,bin_hi,count
void write_histogram_csv(std::ostream& out, const std::vector<double>& edges, const std::vector<std::size_t>& counts);

/// axis_value,optimizer,mean_tau,std_tau,median_tau,failures
void write_sweep_csv(std::ostream& out, const std::vector<double>& values,
                     const std::vector<ExperimentSummary>& summaries);

}  // namespace sqn
