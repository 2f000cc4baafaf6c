#pragma once

#include <string>

#include "csi/data_model.hpp"

namespace csi {

struct EvalResult {
  std::string metric;
  double value = 0.0;
  std::size_t n_evaluated = 0;
};

/// Mann-Whitney AUC: P(score+ > score-) + 0.5 P(tie), computed by sorting.
/// Tie pairs get half credit. Both classes must be present. Matches
/// brute-force pair counting exactly (the numerator is assembled from integer
/// pair counts).
double auc(const Vector& scores, const Vector& labels);

/// F1 on the +1 class; 0 when precision + recall is 0.
double f1(const Vector& predictions, const Vector& labels);

double mse(const Vector& predictions, const Vector& labels);

double accuracy(const Vector& predictions, const Vector& labels);

}  // namespace csi
