#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace csi {

/// Immutable finite-valued vector. NaN/Inf are rejected at construction so a
/// diverging solver fails at the boundary where the bad value appears instead
/// of propagating it.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::vector<double> entries);
  static Vector zeros(std::size_t n);

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const noexcept { return entries_[i]; }
  std::span<const double> values() const noexcept { return entries_; }
  const std::vector<double>& raw() const noexcept { return entries_; }

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> entries_;
};

/// n x d design matrix, dense row-major or sparse CSR. Immutable; all
/// operations are safe to call concurrently.
class FeatureMatrix {
 public:
  static FeatureMatrix dense(std::size_t rows, std::size_t cols,
                             std::vector<double> values);
  /// CSR storage. Per-row column indices must be strictly increasing and < cols.
  static FeatureMatrix sparse(std::size_t rows, std::size_t cols,
                              std::vector<std::size_t> row_offsets,
                              std::vector<std::uint32_t> indices,
                              std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_sparse() const noexcept { return sparse_; }

  std::span<const double> dense_values() const;
  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::uint32_t> indices() const { return indices_; }
  std::span<const double> sparse_values() const { return values_; }

  FeatureMatrix to_dense() const;

  double row_dot(std::size_t i, std::span<const double> w) const;
  /// Writes row i densified into out (length cols).
  void copy_row(std::size_t i, double* out) const;

 private:
  FeatureMatrix() = default;
  std::size_t rows_ = 0, cols_ = 0;
  bool sparse_ = false;
  std::vector<double> values_;             // dense payload or CSR values
  std::vector<std::size_t> row_offsets_;   // CSR only, size rows+1
  std::vector<std::uint32_t> indices_;     // CSR only
};

enum class ResponseKind { kRegression, kBinaryClassification };

/// Labeled dataset. Classification responses must be exactly -1 or +1.
class Dataset {
 public:
  Dataset(FeatureMatrix features, Vector responses, ResponseKind kind);

  const FeatureMatrix& features() const noexcept { return features_; }
  const Vector& responses() const noexcept { return responses_; }
  ResponseKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return features_.rows(); }
  std::size_t dim() const noexcept { return features_.cols(); }

 private:
  FeatureMatrix features_;
  Vector responses_;
  ResponseKind kind_;
};

/// X w. Parallelized over rows; per-row reduction order is fixed, so results
/// are identical for any thread count.
Vector matvec(const FeatureMatrix& m, const Vector& w);

/// X^T v.
Vector transpose_matvec(const FeatureMatrix& m, const Vector& v);

struct StandardizeResult {
  Dataset data;
  Vector column_means;
  Vector column_scales;
};

/// Centers and scales every column to mean 0, standard deviation 1
/// (population convention: divide by n). Zero-variance columns are centered
/// and given scale 1. Sparse inputs come back dense since centering fills in
/// the zeros.
StandardizeResult standardize(const Dataset& ds);

}  // namespace csi
