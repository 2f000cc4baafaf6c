#include "csi/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace csi {

namespace {

void require_labels(const Vector& labels, const char* who) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != 1.0 && labels[i] != -1.0)
      throw std::invalid_argument(std::string(who) + ": label at index " +
                                  std::to_string(i) + " is not -1/+1");
}

void require_same_length(const Vector& a, const Vector& b, const char* who) {
  if (a.size() != b.size())
    throw std::invalid_argument(std::string(who) + ": length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
}

}  // namespace

double auc(const Vector& scores, const Vector& labels) {
  require_same_length(scores, labels, "auc");
  require_labels(labels, "auc");
  const std::size_t n = scores.size();

  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n; ++i) n_pos += labels[i] == 1.0;
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("auc: both classes must be present");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Walk tie groups in ascending score order. A positive beats every negative
  // already passed and half-ties with the negatives in its own group; integer
  // counts keep the numerator exact.
  double wins = 0.0;
  double tie_pairs = 0.0;
  std::size_t neg_below = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    std::size_t pos_here = 0, neg_here = 0;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      if (labels[order[j]] == 1.0)
        ++pos_here;
      else
        ++neg_here;
      ++j;
    }
    wins += static_cast<double>(pos_here) * static_cast<double>(neg_below);
    tie_pairs += static_cast<double>(pos_here) * static_cast<double>(neg_here);
    neg_below += neg_here;
    i = j;
  }
  return (wins + 0.5 * tie_pairs) /
         (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double f1(const Vector& predictions, const Vector& labels) {
  require_same_length(predictions, labels, "f1");
  require_labels(labels, "f1");
  require_labels(predictions, "f1");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] == 1.0 && labels[i] == 1.0) ++tp;
    if (predictions[i] == 1.0 && labels[i] == -1.0) ++fp;
    if (predictions[i] == -1.0 && labels[i] == 1.0) ++fn;
  }
  const double denom = static_cast<double>(2 * tp + fp + fn);
  if (denom == 0.0) return 0.0;
  return 2.0 * static_cast<double>(tp) / denom;
}

double mse(const Vector& predictions, const Vector& labels) {
  require_same_length(predictions, labels, "mse");
  if (predictions.size() == 0) throw std::invalid_argument("mse: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double d = predictions[i] - labels[i];
    acc += d * d;
  }
  return acc / static_cast<double>(labels.size());
}

double accuracy(const Vector& predictions, const Vector& labels) {
  require_same_length(predictions, labels, "accuracy");
  require_labels(labels, "accuracy");
  require_labels(predictions, "accuracy");
  if (predictions.size() == 0) throw std::invalid_argument("accuracy: empty input");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) correct += predictions[i] == labels[i];
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

}  // namespace csi
