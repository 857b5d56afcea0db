#include "sqn/harness/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "sqn/errors.hpp"

namespace sqn {

std::vector<std::size_t> histogram(const std::vector<double>& values, const std::vector<double>& edges) {
  if (edges.size() < 2) throw InvalidArgument("histogram: need at least two bin edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw InvalidArgument("histogram: bin edges must be strictly increasing");

  const std::size_t bins = edges.size() - 1;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    // upper_bound gives the first edge > v, so v sits in the bin to its left.
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t bin = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
    counts[std::min(bin, bins - 1)] += 1;
  }
  return counts;
}

std::vector<double> log_bin_edges(double cap, std::size_t bins) {
  if (!(cap > 1.0) || bins < 2) throw InvalidArgument("log_bin_edges: need cap > 1 and at least two bins");
  std::vector<double> edges{0.0};
  const double step = std::log(cap) / static_cast<double>(bins - 1);
  for (std::size_t k = 0; k + 1 < bins; ++k) edges.push_back(std::exp(step * static_cast<double>(k)));
  edges.push_back(cap);
  return edges;
}

}  // namespace sqn
