#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "csi/data_model.hpp"
#include "csi/lpav.hpp"

namespace csi {

/// Column statistics applied to inputs before the inner product, stored so a
/// model trained on standardized data scores raw feature rows.
struct Preprocessing {
  Vector means;
  Vector scales;
};

/// (rows, cols) of the parameter matrix for vectorized matrix tasks.
struct MatrixShape {
  std::size_t rows = 0;
  std::size_t cols = 0;
};

/// The deployable predictor: weight vector plus fitted monotone link.
/// Immutable; predict is safe for unlimited concurrent callers.
class SimModel {
 public:
  SimModel(Vector weights, MonotoneLink link,
           std::optional<Preprocessing> preprocessing = std::nullopt,
           std::optional<MatrixShape> shape = std::nullopt);

  const Vector& weights() const noexcept { return weights_; }
  const MonotoneLink& link() const noexcept { return link_; }
  const std::optional<Preprocessing>& preprocessing() const noexcept {
    return preprocessing_;
  }
  const std::optional<MatrixShape>& shape() const noexcept { return shape_; }
  std::size_t dim() const noexcept { return weights_.size(); }

  /// g(w . x~) where x~ is x after the stored standardization. Output is
  /// clamped to the link's value range by construction.
  double predict(std::span<const double> x) const;

  /// +1 when predict(x) >= threshold, else -1 (ties go to +1).
  int predict_class(std::span<const double> x, double threshold = 0.0) const;

  /// Scores every row. Same code path as predict row by row.
  Vector predict_all(const FeatureMatrix& features) const;

  /// Versioned, self-describing text format; numbers use shortest
  /// round-trip decimals so load(save(m)) reproduces every field bit-exactly.
  /// Field order is documented in docs/model_format.md.
  void save(std::ostream& out) const;
  static SimModel load(std::istream& in);

  void save_file(const std::string& path) const;
  static SimModel load_file(const std::string& path);

 private:
  Vector weights_;
  MonotoneLink link_;
  std::optional<Preprocessing> preprocessing_;
  std::optional<MatrixShape> shape_;
};

}  // namespace csi
