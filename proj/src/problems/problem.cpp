#include "sqn/problems/problem.hpp"

#include <string>

#include "sqn/errors.hpp"

namespace sqn {

void StochasticProblem::check_dim(const Vector& w) const {
  if (w.size() != dim()) {
    throw DimensionError(std::string(name()) + ": expected dimension " + std::to_string(dim()) + ", got " +
                         std::to_string(w.size()));
  }
}

void StochasticProblem::check_batch_size(std::size_t L) {
  if (L == 0) throw InvalidArgument("batch size L must be at least 1");
}

}  // namespace sqn
