#pragma once

#include <cstddef>
#include <vector>

namespace sqn {

/// Counts over [e0,e1), [e1,e2), ..., [e_{k-1}, e_k]. Values outside the
/// edges are clamped into the first or last bin so every value is counted.
/// Throws InvalidArgument unless edges has at least two strictly increasing entries.
std::vector<std::size_t> histogram(const std::vector<double>& values, const std::vector<double>& edges);

/// {0, 1, ..., cap} with logarithmically spaced interior edges.
std::vector<double> log_bin_edges(double cap, std::size_t bins);

}  // namespace sqn
