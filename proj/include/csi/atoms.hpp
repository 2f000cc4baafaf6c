#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "csi/data_model.hpp"
#include "csi/linalg.hpp"

namespace csi {

/// Strategy object mapping a parameter vector to its best s-atom
/// representation: keep the s atoms with the largest coefficients under the
/// family's canonical decomposition, zero the rest. Projectors are immutable
/// and safe for concurrent calls. When s is at least the number of available
/// atoms the projection is the identity (with a one-time warning when it
/// strictly exceeds it).
class AtomicProjector {
 public:
  virtual ~AtomicProjector() = default;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t budget() const noexcept { return budget_; }

  Vector project(const Vector& w) const;
  std::vector<double> project_values(std::span<const double> w) const;

  /// Number of atoms with coefficient magnitude above tol in the canonical
  /// decomposition (nonzeros / nonzero groups / numerical rank). Upper bound
  /// on the atomic cardinality; exact for the sparse and group families.
  std::size_t cardinality_upper(std::span<const double> w, double tol = 1e-9) const;

  virtual std::string describe() const = 0;

 protected:
  AtomicProjector(std::size_t dim, std::size_t budget);
  virtual void do_project(std::span<const double> w, std::vector<double>& out) const = 0;
  virtual std::size_t do_cardinality(std::span<const double> w, double tol) const = 0;

 private:
  std::size_t dim_;
  std::size_t budget_;
};

/// Signed canonical basis atoms: keep the s largest-magnitude coordinates.
/// Ties break toward the lower index.
class SparseProjector final : public AtomicProjector {
 public:
  SparseProjector(std::size_t dim, std::size_t s);
  std::string describe() const override;

 protected:
  void do_project(std::span<const double> w, std::vector<double>& out) const override;
  std::size_t do_cardinality(std::span<const double> w, double tol) const override;
};

/// Unit-disk atoms over a disjoint partition of the coordinates: keep the s
/// groups with the largest restricted Euclidean norm. Ties break toward the
/// lower group id.
class GroupProjector final : public AtomicProjector {
 public:
  GroupProjector(std::vector<std::vector<std::size_t>> groups, std::size_t s);
  std::string describe() const override;
  std::size_t num_groups() const noexcept { return groups_.size(); }

 protected:
  void do_project(std::span<const double> w, std::vector<double>& out) const override;
  std::size_t do_cardinality(std::span<const double> w, double tol) const override;

 private:
  std::vector<std::vector<std::size_t>> groups_;
};

struct PowerIterOptions {
  std::size_t max_iters = 200;
  double tol = 1e-10;
  std::size_t oversample = 2;
};

/// Unit-rank atoms: best rank-s approximation of the vector reshaped to a
/// rows x cols matrix (row-major), computed by block subspace iteration with
/// a fixed-seed Gaussian start.
class LowRankProjector final : public AtomicProjector {
 public:
  LowRankProjector(std::size_t rows, std::size_t cols, std::size_t s,
                   PowerIterOptions opts = {});
  std::string describe() const override;
  std::size_t mat_rows() const noexcept { return mrows_; }
  std::size_t mat_cols() const noexcept { return mcols_; }

 protected:
  void do_project(std::span<const double> w, std::vector<double>& out) const override;
  std::size_t do_cardinality(std::span<const double> w, double tol) const override;

 private:
  std::size_t mrows_, mcols_;
  PowerIterOptions opts_;
};

/// Orthonormal eigenvectors and shifted eigenvalues of L + eps*I.
struct GraphFactors {
  linalg::DenseMat u;       // columns are eigenvectors
  std::vector<double> s;    // eigenvalues, all >= eps > 0
};

/// Eigendecomposes L + eps*I for each side. eps must be strictly positive: a
/// graph Laplacian always has the constant vector in its kernel, so the
/// unshifted factors would be singular. Inputs must be symmetric within 1e-10
/// and PSD within -1e-10.
std::pair<GraphFactors, GraphFactors> build_graph_factors(
    const linalg::DenseMat& row_laplacian, const linalg::DenseMat& col_laplacian,
    double epsilon);

/// Graph-weighted nuclear atoms: map W to S_u^{1/2} U_u^{-1} W U_v^{-T} S_v^{1/2},
/// rank-s truncate in the weighted domain, map back. With identity factors
/// this degenerates to the plain low-rank projection.
class GraphLowRankProjector final : public AtomicProjector {
 public:
  GraphLowRankProjector(GraphFactors row_factors, GraphFactors col_factors,
                        std::size_t s, PowerIterOptions opts = {});
  std::string describe() const override;

 protected:
  void do_project(std::span<const double> w, std::vector<double>& out) const override;
  std::size_t do_cardinality(std::span<const double> w, double tol) const override;

 private:
  linalg::DenseMat to_weighted(std::span<const double> w) const;

  GraphFactors row_f_, col_f_;
  PowerIterOptions opts_;
};

/// Best rank-s approximation by block subspace iteration (s + oversample
/// start columns, fixed-seed Gaussian init). Exposed for tests.
linalg::DenseMat rank_truncate(const linalg::DenseMat& a, std::size_t s,
                               const PowerIterOptions& opts = {});

}  // namespace csi
