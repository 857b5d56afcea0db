#pragma once

#include <iosfwd>

#include "sqn/problems/logistic.hpp"
#include "sqn/problems/svm.hpp"

namespace sqn {

// CSV interchange for training sets. Dense rows: `label,x_1,...,x_n`.
// Sparse binary rows: `label,c_1,...,c_k` listing the one-valued columns.
// Regularization and weighting are not part of the file.

void write_svm_csv(std::ostream& out, const SvmDataset& data);
SvmDataset read_svm_csv(std::istream& in, double lambda = kSvmDefaultLambda);

void write_logistic_csv(std::ostream& out, const LogisticDataset& data);
/// n is the feature dimension (column indices must be < n).
LogisticDataset read_logistic_csv(std::istream& in, std::size_t n, double lambda = kLogisticDefaultLambda,
                                  double gamma = kLogisticDefaultGamma);

}  // namespace sqn
