#include "csi/data_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "csi/kernels.hpp"

namespace csi {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]))
      throw std::invalid_argument(std::string(what) + ": non-finite value at index " +
                                  std::to_string(i));
  }
}

}  // namespace

Vector::Vector(std::vector<double> entries) : entries_(std::move(entries)) {
  require_finite(entries_, "Vector");
}

Vector Vector::zeros(std::size_t n) {
  Vector v;
  v.entries_.assign(n, 0.0);
  return v;
}

FeatureMatrix FeatureMatrix::dense(std::size_t rows, std::size_t cols,
                                   std::vector<double> values) {
  if (values.size() != rows * cols)
    throw std::invalid_argument("FeatureMatrix::dense: expected " +
                                std::to_string(rows * cols) + " values, got " +
                                std::to_string(values.size()));
  require_finite(values, "FeatureMatrix::dense");
  FeatureMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.sparse_ = false;
  m.values_ = std::move(values);
  return m;
}

FeatureMatrix FeatureMatrix::sparse(std::size_t rows, std::size_t cols,
                                    std::vector<std::size_t> row_offsets,
                                    std::vector<std::uint32_t> indices,
                                    std::vector<double> values) {
  if (row_offsets.size() != rows + 1)
    throw std::invalid_argument("FeatureMatrix::sparse: row_offsets size mismatch");
  if (row_offsets.front() != 0 || row_offsets.back() != indices.size() ||
      indices.size() != values.size())
    throw std::invalid_argument("FeatureMatrix::sparse: inconsistent CSR arrays");
  require_finite(values, "FeatureMatrix::sparse");
  for (std::size_t i = 0; i < rows; ++i) {
    if (row_offsets[i] > row_offsets[i + 1])
      throw std::invalid_argument("FeatureMatrix::sparse: row_offsets not monotone");
    for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      if (indices[k] >= cols)
        throw std::invalid_argument("FeatureMatrix::sparse: column index " +
                                    std::to_string(indices[k]) + " out of range in row " +
                                    std::to_string(i));
      if (k > row_offsets[i] && indices[k] <= indices[k - 1])
        throw std::invalid_argument(
            "FeatureMatrix::sparse: column indices not strictly increasing in row " +
            std::to_string(i));
    }
  }
  FeatureMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.sparse_ = true;
  m.row_offsets_ = std::move(row_offsets);
  m.indices_ = std::move(indices);
  m.values_ = std::move(values);
  return m;
}

std::span<const double> FeatureMatrix::dense_values() const {
  if (sparse_)
    throw std::logic_error("FeatureMatrix::dense_values called on sparse matrix");
  return values_;
}

FeatureMatrix FeatureMatrix::to_dense() const {
  if (!sparse_) return *this;
  std::vector<double> out(rows_ * cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      out[i * cols_ + indices_[k]] = values_[k];
  return dense(rows_, cols_, std::move(out));
}

double FeatureMatrix::row_dot(std::size_t i, std::span<const double> w) const {
  double acc = 0.0;
  if (sparse_) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      acc += values_[k] * w[indices_[k]];
  } else {
    const double* row = values_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * w[j];
  }
  return acc;
}

void FeatureMatrix::copy_row(std::size_t i, double* out) const {
  if (sparse_) {
    std::fill(out, out + cols_, 0.0);
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      out[indices_[k]] = values_[k];
  } else {
    const double* row = values_.data() + i * cols_;
    std::copy(row, row + cols_, out);
  }
}

Dataset::Dataset(FeatureMatrix features, Vector responses, ResponseKind kind)
    : features_(std::move(features)), responses_(std::move(responses)), kind_(kind) {
  if (responses_.size() != features_.rows())
    throw std::invalid_argument("Dataset: " + std::to_string(responses_.size()) +
                                " responses for " + std::to_string(features_.rows()) +
                                " rows");
  if (kind_ == ResponseKind::kBinaryClassification) {
    for (std::size_t i = 0; i < responses_.size(); ++i) {
      if (responses_[i] != 1.0 && responses_[i] != -1.0)
        throw std::invalid_argument("Dataset: classification label at row " +
                                    std::to_string(i) + " is not -1/+1");
    }
  }
}

Vector matvec(const FeatureMatrix& m, const Vector& w) {
  if (w.size() != m.cols())
    throw std::invalid_argument("matvec: w has length " + std::to_string(w.size()) +
                                ", expected " + std::to_string(m.cols()));
  std::vector<double> out(m.rows());
  if (m.is_sparse()) {
    kernels::active::sparse_matvec(m.row_offsets().data(), m.indices().data(),
                                   m.sparse_values().data(), m.rows(),
                                   w.raw().data(), out.data());
  } else {
    kernels::active::dense_matvec(m.dense_values().data(), m.rows(), m.cols(),
                                  w.raw().data(), out.data());
  }
  return Vector(std::move(out));
}

Vector transpose_matvec(const FeatureMatrix& m, const Vector& v) {
  if (v.size() != m.rows())
    throw std::invalid_argument("transpose_matvec: v has length " +
                                std::to_string(v.size()) + ", expected " +
                                std::to_string(m.rows()));
  std::vector<double> out(m.cols());
  if (m.is_sparse()) {
    kernels::active::sparse_tmatvec(m.row_offsets().data(), m.indices().data(),
                                    m.sparse_values().data(), m.rows(), m.cols(),
                                    v.raw().data(), out.data());
  } else {
    kernels::active::dense_tmatvec(m.dense_values().data(), m.rows(), m.cols(),
                                   v.raw().data(), out.data());
  }
  return Vector(std::move(out));
}

StandardizeResult standardize(const Dataset& ds) {
  const std::size_t n = ds.size();
  const std::size_t d = ds.dim();
  if (n < 2) throw std::invalid_argument("standardize: needs at least 2 rows");

  const FeatureMatrix dense = ds.features().to_dense();
  std::span<const double> x = dense.dense_values();

  std::vector<double> mean(d, 0.0), scale(d, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += x[i * d + j];
  for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);

  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double c = x[i * d + j] - mean[j];
      var[j] += c * c;
    }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(n));
    scale[j] = sd > 0.0 ? sd : 1.0;
  }

  std::vector<double> out(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out[i * d + j] = (x[i * d + j] - mean[j]) / scale[j];

  Dataset transformed(FeatureMatrix::dense(n, d, std::move(out)), ds.responses(),
                      ds.kind());
  return StandardizeResult{std::move(transformed), Vector(std::move(mean)),
                           Vector(std::move(scale))};
}

}  // namespace csi
