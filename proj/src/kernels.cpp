#include "csi/kernels.hpp"

#include <algorithm>

namespace csi::kernels {

namespace serial {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void dense_matvec(const double* x, std::size_t n, std::size_t d,
                  const double* w, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x + i * d;
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += row[j] * w[j];
    out[i] = acc;
  }
}

void dense_tmatvec(const double* x, std::size_t n, std::size_t d,
                   const double* v, double* out) {
  std::fill(out, out + d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x + i * d;
    const double vi = v[i];
    for (std::size_t j = 0; j < d; ++j) out[j] += row[j] * vi;
  }
}

void sparse_matvec(const std::size_t* row_offsets, const std::uint32_t* idx,
                   const double* val, std::size_t n, const double* w,
                   double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
      acc += val[k] * w[idx[k]];
    out[i] = acc;
  }
}

void sparse_tmatvec(const std::size_t* row_offsets, const std::uint32_t* idx,
                    const double* val, std::size_t n, std::size_t d,
                    const double* v, double* out) {
  std::fill(out, out + d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double vi = v[i];
    for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
      out[idx[k]] += val[k] * vi;
  }
}

void axpy(std::span<const double> a, double c, std::span<const double> b,
          double* out) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + c * b[i];
}

}  // namespace serial

namespace omp {

namespace {
// Column tile for the transposed product: each tile is owned by one thread
// and scanned in ascending row order, matching the serial accumulation.
constexpr std::size_t kColTile = 512;
}  // namespace

void dense_matvec(const double* x, std::size_t n, std::size_t d,
                  const double* w, double* out) {
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x + i * d;
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += row[j] * w[j];
    out[i] = acc;
  }
}

void dense_tmatvec(const double* x, std::size_t n, std::size_t d,
                   const double* v, double* out) {
  const std::size_t tiles = (d + kColTile - 1) / kColTile;
#pragma omp parallel for schedule(static)
  for (std::size_t t = 0; t < tiles; ++t) {
    const std::size_t j0 = t * kColTile;
    const std::size_t j1 = std::min(j0 + kColTile, d);
    std::fill(out + j0, out + j1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = x + i * d;
      const double vi = v[i];
      for (std::size_t j = j0; j < j1; ++j) out[j] += row[j] * vi;
    }
  }
}

void sparse_matvec(const std::size_t* row_offsets, const std::uint32_t* idx,
                   const double* val, std::size_t n, const double* w,
                   double* out) {
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
      acc += val[k] * w[idx[k]];
    out[i] = acc;
  }
}

void sparse_tmatvec(const std::size_t* row_offsets, const std::uint32_t* idx,
                    const double* val, std::size_t n, std::size_t d,
                    const double* v, double* out) {
  serial::sparse_tmatvec(row_offsets, idx, val, n, d, v, out);
}

void axpy(std::span<const double> a, double c, std::span<const double> b,
          double* out) {
  const std::size_t n = a.size();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + c * b[i];
}

}  // namespace omp

}  // namespace csi::kernels
