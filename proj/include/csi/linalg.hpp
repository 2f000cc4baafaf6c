#pragma once

#include <cstddef>
#include <vector>

// Small dense helpers backing the projection operators. Everything here is
// deterministic: fixed sweep orders, fixed sign conventions.

namespace csi::linalg {

/// Row-major dense matrix.
struct DenseMat {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  DenseMat() = default;
  DenseMat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

DenseMat matmul(const DenseMat& a, const DenseMat& b);
DenseMat transpose(const DenseMat& a);

/// Frobenius distance.
double frob_dist(const DenseMat& a, const DenseMat& b);

/// Orthonormalizes the columns in place by modified Gram-Schmidt with one
/// reorthogonalization pass. Columns whose norm collapses below
/// drop_tol * (original scale) are removed; the returned matrix may have
/// fewer columns than the input.
DenseMat mgs_orthonormalize(DenseMat q, double drop_tol = 1e-12);

struct SymEig {
  std::vector<double> values;  // descending
  DenseMat vectors;            // column k = eigenvector of values[k]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenpairs are
/// sorted by descending eigenvalue; each eigenvector is sign-fixed so its
/// first component of significant magnitude is positive.
SymEig jacobi_eigh(DenseMat a, std::size_t max_sweeps = 100, double tol = 1e-14);

}  // namespace csi::linalg
