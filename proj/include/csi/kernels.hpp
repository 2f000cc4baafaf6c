#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

// Data-parallel inner loops of the trainer. Two implementations with the same
// contract: kernels::serial is the reference, kernels::omp parallelizes with
// OpenMP. Every kernel performs its per-output reduction in a fixed order
// (ascending operand index), so the parallel version is bit-identical to the
// serial one for any thread count. tools/bench_kernels.cpp compares the two.
//
// Reductions to a single scalar (dot, sums) stay serial: an omp reduction
// clause would make the addition order depend on the thread count.

namespace csi::kernels {

namespace serial {

double dot(std::span<const double> a, std::span<const double> b);

/// out[i] = <row_i, w>, X dense row-major n x d.
void dense_matvec(const double* x, std::size_t n, std::size_t d,
                  const double* w, double* out);

/// out[j] = sum_i X[i][j] * v[i]; per-column sums accumulate in ascending i.
void dense_tmatvec(const double* x, std::size_t n, std::size_t d,
                   const double* v, double* out);

/// CSR row dot products.
void sparse_matvec(const std::size_t* row_offsets, const std::uint32_t* idx,
                   const double* val, std::size_t n, const double* w,
                   double* out);

/// Scatter X^T v for CSR rows. Sequential in both namespaces: the scatter
/// target order depends on the column pattern, not the row split.
void sparse_tmatvec(const std::size_t* row_offsets, const std::uint32_t* idx,
                    const double* val, std::size_t n, std::size_t d,
                    const double* v, double* out);

/// out[i] = a[i] + c * b[i]
void axpy(std::span<const double> a, double c, std::span<const double> b,
          double* out);

}  // namespace serial

namespace omp {

void dense_matvec(const double* x, std::size_t n, std::size_t d,
                  const double* w, double* out);
void dense_tmatvec(const double* x, std::size_t n, std::size_t d,
                   const double* v, double* out);
void sparse_matvec(const std::size_t* row_offsets, const std::uint32_t* idx,
                   const double* val, std::size_t n, const double* w,
                   double* out);
void sparse_tmatvec(const std::size_t* row_offsets, const std::uint32_t* idx,
                    const double* val, std::size_t n, std::size_t d,
                    const double* v, double* out);
void axpy(std::span<const double> a, double c, std::span<const double> b,
          double* out);

}  // namespace omp

// Default entry points: OpenMP kernels when compiled with OpenMP support,
// the serial reference otherwise.
#ifdef _OPENMP
namespace active = omp;
#else
namespace active = serial;
#endif

}  // namespace csi::kernels
