#include "csi/atoms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "csi/rng.hpp"

namespace csi {

using linalg::DenseMat;

namespace {

// Fixed seed for the Gaussian start of the subspace iteration; projections
// must be reproducible run to run.
constexpr std::uint64_t kPowerSeed = 0x5A17CE5D00DCBA11ULL;

void warn_identity(const std::string& what, std::size_t s, std::size_t available) {
  std::cerr << "csi: warning: " << what << ": atom budget s=" << s
            << " exceeds the " << available
            << " available atoms; projection is the identity\n";
}

DenseMat reshape(std::span<const double> w, std::size_t rows, std::size_t cols) {
  DenseMat a(rows, cols);
  std::copy(w.begin(), w.end(), a.data.begin());
  return a;
}

double subspace_distance(const DenseMat& q0, const DenseMat& q1) {
  if (q0.cols != q1.cols) return std::numeric_limits<double>::infinity();
  if (q0.cols == 0) return 0.0;
  const DenseMat c = linalg::matmul(linalg::transpose(q0), q1);
  const DenseMat g = linalg::matmul(linalg::transpose(c), c);
  const auto eig = linalg::jacobi_eigh(g);
  const double smin_sq = std::clamp(eig.values.back(), 0.0, 1.0);
  return std::sqrt(1.0 - smin_sq);
}

DenseMat gaussian_start(std::size_t rows, std::size_t cols) {
  Rng rng(kPowerSeed);
  DenseMat g(rows, cols);
  for (double& v : g.data) v = rng.normal();
  return g;
}

std::size_t numerical_rank(const DenseMat& a, double tol) {
  // Gram matrix on the smaller side; singular values are sqrt of its
  // spectrum. The squaring limits resolution to ~sqrt(eps) * sigma_max, so
  // anything below that floor is indistinguishable from zero.
  const bool wide = a.cols > a.rows;
  const DenseMat at = linalg::transpose(a);
  const DenseMat g = wide ? linalg::matmul(a, at) : linalg::matmul(at, a);
  const auto eig = linalg::jacobi_eigh(g);
  const double sigma_max = std::sqrt(std::max(eig.values.front(), 0.0));
  const double floor = std::max(tol, 1e-7 * sigma_max);
  std::size_t rank = 0;
  for (double lambda : eig.values)
    if (std::sqrt(std::max(lambda, 0.0)) > floor) ++rank;
  return rank;
}

}  // namespace

DenseMat rank_truncate(const DenseMat& a, std::size_t s, const PowerIterOptions& opts) {
  const std::size_t min_dim = std::min(a.rows, a.cols);
  if (s >= min_dim) return a;

  const std::size_t block = std::min(s + opts.oversample, min_dim);
  DenseMat q = linalg::mgs_orthonormalize(gaussian_start(a.cols, block));
  const DenseMat at = linalg::transpose(a);

  for (std::size_t iter = 0; iter < opts.max_iters; ++iter) {
    DenseMat u = linalg::mgs_orthonormalize(linalg::matmul(a, q));
    if (u.cols == 0) return DenseMat(a.rows, a.cols);  // zero matrix
    DenseMat qn = linalg::mgs_orthonormalize(linalg::matmul(at, u));
    const double dist = subspace_distance(q, qn);
    q = std::move(qn);
    if (dist < opts.tol) break;
  }

  const DenseMat b = linalg::matmul(a, q);                       // rows x block
  const auto eig = linalg::jacobi_eigh(linalg::matmul(linalg::transpose(b), b));
  const std::size_t keep = std::min(s, q.cols);
  DenseMat e(q.cols, keep);
  for (std::size_t i = 0; i < q.cols; ++i)
    for (std::size_t k = 0; k < keep; ++k) e.at(i, k) = eig.vectors.at(i, k);
  // B E_s E_s^T Q^T: the rank-keep part of the projection of A onto span(Q).
  const DenseMat be = linalg::matmul(b, e);
  return linalg::matmul(be, linalg::matmul(linalg::transpose(e), linalg::transpose(q)));
}

AtomicProjector::AtomicProjector(std::size_t dim, std::size_t budget)
    : dim_(dim), budget_(budget) {
  if (dim_ == 0) throw std::invalid_argument("AtomicProjector: dimension must be positive");
  if (budget_ == 0) throw std::invalid_argument("AtomicProjector: atom budget must be >= 1");
}

Vector AtomicProjector::project(const Vector& w) const {
  return Vector(project_values(w.values()));
}

std::vector<double> AtomicProjector::project_values(std::span<const double> w) const {
  if (w.size() != dim_)
    throw std::invalid_argument("project: vector has length " + std::to_string(w.size()) +
                                ", projector expects " + std::to_string(dim_));
  std::vector<double> out(dim_, 0.0);
  do_project(w, out);
  return out;
}

std::size_t AtomicProjector::cardinality_upper(std::span<const double> w,
                                               double tol) const {
  if (w.size() != dim_)
    throw std::invalid_argument("cardinality_upper: vector has length " +
                                std::to_string(w.size()) + ", projector expects " +
                                std::to_string(dim_));
  return do_cardinality(w, tol);
}

SparseProjector::SparseProjector(std::size_t dim, std::size_t s)
    : AtomicProjector(dim, s) {
  if (s > dim) warn_identity("sparse projector", s, dim);
}

void SparseProjector::do_project(std::span<const double> w,
                                 std::vector<double>& out) const {
  const std::size_t d = dim();
  if (budget() >= d) {
    std::copy(w.begin(), w.end(), out.begin());
    return;
  }
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(w[a]), mb = std::abs(w[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  for (std::size_t k = 0; k < budget(); ++k) out[order[k]] = w[order[k]];
}

std::size_t SparseProjector::do_cardinality(std::span<const double> w,
                                            double tol) const {
  std::size_t count = 0;
  for (double v : w)
    if (std::abs(v) > tol) ++count;
  return count;
}

std::string SparseProjector::describe() const {
  return "sparse(s=" + std::to_string(budget()) + ",d=" + std::to_string(dim()) + ")";
}

GroupProjector::GroupProjector(std::vector<std::vector<std::size_t>> groups,
                               std::size_t s)
    : AtomicProjector(
          [&groups] {
            std::size_t total = 0;
            for (const auto& g : groups) total += g.size();
            return total;
          }(),
          s),
      groups_(std::move(groups)) {
  std::vector<std::size_t> all;
  for (auto& g : groups_) {
    if (g.empty()) throw std::invalid_argument("GroupProjector: empty group");
    std::sort(g.begin(), g.end());
    all.insert(all.end(), g.begin(), g.end());
  }
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i] != i)
      throw std::invalid_argument(
          "GroupProjector: groups must form a disjoint partition of 0..d-1");
  if (s > groups_.size()) warn_identity("group projector", s, groups_.size());
}

void GroupProjector::do_project(std::span<const double> w,
                                std::vector<double>& out) const {
  if (budget() >= groups_.size()) {
    std::copy(w.begin(), w.end(), out.begin());
    return;
  }
  std::vector<double> norms(groups_.size(), 0.0);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    double acc = 0.0;
    for (std::size_t idx : groups_[g]) acc += w[idx] * w[idx];
    norms[g] = std::sqrt(acc);
  }
  std::vector<std::size_t> order(groups_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (norms[a] != norms[b]) return norms[a] > norms[b];
    return a < b;
  });
  for (std::size_t k = 0; k < budget(); ++k)
    for (std::size_t idx : groups_[order[k]]) out[idx] = w[idx];
}

std::size_t GroupProjector::do_cardinality(std::span<const double> w,
                                           double tol) const {
  std::size_t count = 0;
  for (const auto& g : groups_) {
    double acc = 0.0;
    for (std::size_t idx : g) acc += w[idx] * w[idx];
    if (std::sqrt(acc) > tol) ++count;
  }
  return count;
}

std::string GroupProjector::describe() const {
  return "group(s=" + std::to_string(budget()) + ",groups=" +
         std::to_string(groups_.size()) + ",d=" + std::to_string(dim()) + ")";
}

LowRankProjector::LowRankProjector(std::size_t rows, std::size_t cols, std::size_t s,
                                   PowerIterOptions opts)
    : AtomicProjector(rows * cols, s), mrows_(rows), mcols_(cols), opts_(opts) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("LowRankProjector: zero matrix dimension");
  if (s > std::min(rows, cols)) warn_identity("low-rank projector", s, std::min(rows, cols));
}

void LowRankProjector::do_project(std::span<const double> w,
                                  std::vector<double>& out) const {
  const DenseMat p = rank_truncate(reshape(w, mrows_, mcols_), budget(), opts_);
  std::copy(p.data.begin(), p.data.end(), out.begin());
}

std::size_t LowRankProjector::do_cardinality(std::span<const double> w,
                                             double tol) const {
  return numerical_rank(reshape(w, mrows_, mcols_), tol);
}

std::string LowRankProjector::describe() const {
  return "lowrank(s=" + std::to_string(budget()) + ",shape=" + std::to_string(mrows_) +
         "x" + std::to_string(mcols_) + ")";
}

namespace {

GraphFactors factor_one_side(const DenseMat& laplacian, double epsilon,
                             const char* side) {
  if (laplacian.rows != laplacian.cols)
    throw std::invalid_argument(std::string("build_graph_factors: ") + side +
                                " Laplacian is not square");
  const std::size_t n = laplacian.rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(laplacian.at(i, j) - laplacian.at(j, i)) > 1e-10)
        throw std::invalid_argument(std::string("build_graph_factors: ") + side +
                                    " Laplacian is not symmetric");

  // Exactly-diagonal input (edgeless graph): the factors are the identity with
  // the diagonal itself, ordered descending with index tie-break.
  bool diagonal = true;
  for (std::size_t i = 0; i < n && diagonal; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && laplacian.at(i, j) != 0.0) {
        diagonal = false;
        break;
      }
  if (diagonal) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return laplacian.at(a, a) > laplacian.at(b, b);
    });
    GraphFactors f;
    f.u = DenseMat(n, n);
    f.s.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (laplacian.at(order[k], order[k]) < -1e-10)
        throw std::invalid_argument(std::string("build_graph_factors: ") + side +
                                    " Laplacian is not positive semidefinite");
      f.s[k] = laplacian.at(order[k], order[k]) + epsilon;
      f.u.at(order[k], k) = 1.0;
    }
    for (double v : f.s)
      if (!(v > 0.0))
        throw std::invalid_argument("build_graph_factors: shifted eigenvalue not positive");
    return f;
  }

  Eigen::MatrixXd l(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = laplacian.at(i, j);
  // Symmetrize exactly before factoring; asymmetry beyond the gate is rejected above.
  l = 0.5 * (l + l.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("build_graph_factors: eigendecomposition failed");
  if (solver.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument(std::string("build_graph_factors: ") + side +
                                " Laplacian is not positive semidefinite");

  GraphFactors f;
  f.u = DenseMat(n, n);
  f.s.resize(n);
  // Eigen sorts ascending; store descending with a deterministic sign fix.
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Index src = static_cast<Eigen::Index>(n - 1 - k);
    f.s[k] = solver.eigenvalues()(src) + epsilon;
    double colmax = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      colmax = std::max(colmax, std::abs(solver.eigenvectors()(static_cast<Eigen::Index>(i), src)));
    double sign = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = solver.eigenvectors()(static_cast<Eigen::Index>(i), src);
      if (std::abs(v) > 1e-12 * colmax) {
        sign = v > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      f.u.at(i, k) = sign * solver.eigenvectors()(static_cast<Eigen::Index>(i), src);
  }
  for (double v : f.s)
    if (!(v > 0.0))
      throw std::invalid_argument("build_graph_factors: shifted eigenvalue not positive");
  return f;
}

DenseMat diag_scale_rows(const std::vector<double>& d, const DenseMat& m) {
  DenseMat out = m;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out.at(i, j) = d[i] * m.at(i, j);
  return out;
}

DenseMat diag_scale_cols(const DenseMat& m, const std::vector<double>& d) {
  DenseMat out = m;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out.at(i, j) = m.at(i, j) * d[j];
  return out;
}

}  // namespace

std::pair<GraphFactors, GraphFactors> build_graph_factors(
    const DenseMat& row_laplacian, const DenseMat& col_laplacian, double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument(
        "build_graph_factors: epsilon must be strictly positive (a graph Laplacian "
        "has a zero eigenvalue, so the unshifted factors are singular)");
  return {factor_one_side(row_laplacian, epsilon, "row"),
          factor_one_side(col_laplacian, epsilon, "col")};
}

GraphLowRankProjector::GraphLowRankProjector(GraphFactors row_factors,
                                             GraphFactors col_factors, std::size_t s,
                                             PowerIterOptions opts)
    : AtomicProjector(row_factors.u.rows * col_factors.u.rows, s),
      row_f_(std::move(row_factors)),
      col_f_(std::move(col_factors)),
      opts_(opts) {
  const std::size_t min_dim = std::min(row_f_.u.rows, col_f_.u.rows);
  if (s > min_dim) warn_identity("graph low-rank projector", s, min_dim);
}

DenseMat GraphLowRankProjector::to_weighted(std::span<const double> w) const {
  const std::size_t rows = row_f_.u.rows, cols = col_f_.u.rows;
  const DenseMat a = reshape(w, rows, cols);
  std::vector<double> su_sqrt(rows), sv_sqrt(cols);
  for (std::size_t i = 0; i < rows; ++i) su_sqrt[i] = std::sqrt(row_f_.s[i]);
  for (std::size_t j = 0; j < cols; ++j) sv_sqrt[j] = std::sqrt(col_f_.s[j]);
  // S_u^{1/2} U_u^T A U_v S_v^{1/2}; U is orthogonal so U^{-1} = U^T.
  const DenseMat ut_a = linalg::matmul(linalg::transpose(row_f_.u), a);
  const DenseMat ut_a_v = linalg::matmul(ut_a, col_f_.u);
  return diag_scale_rows(su_sqrt, diag_scale_cols(ut_a_v, sv_sqrt));
}

void GraphLowRankProjector::do_project(std::span<const double> w,
                                       std::vector<double>& out) const {
  const std::size_t rows = row_f_.u.rows, cols = col_f_.u.rows;
  if (budget() >= std::min(rows, cols)) {
    std::copy(w.begin(), w.end(), out.begin());
    return;
  }
  const DenseMat truncated = rank_truncate(to_weighted(w), budget(), opts_);
  std::vector<double> su_inv(rows), sv_inv(cols);
  for (std::size_t i = 0; i < rows; ++i) su_inv[i] = 1.0 / std::sqrt(row_f_.s[i]);
  for (std::size_t j = 0; j < cols; ++j) sv_inv[j] = 1.0 / std::sqrt(col_f_.s[j]);
  const DenseMat scaled = diag_scale_rows(su_inv, diag_scale_cols(truncated, sv_inv));
  const DenseMat back =
      linalg::matmul(row_f_.u, linalg::matmul(scaled, linalg::transpose(col_f_.u)));
  std::copy(back.data.begin(), back.data.end(), out.begin());
}

std::size_t GraphLowRankProjector::do_cardinality(std::span<const double> w,
                                                  double tol) const {
  return numerical_rank(to_weighted(w), tol);
}

std::string GraphLowRankProjector::describe() const {
  return "graph-lowrank(s=" + std::to_string(budget()) + ",shape=" +
         std::to_string(row_f_.u.rows) + "x" + std::to_string(col_f_.u.rows) + ")";
}

}  // namespace csi
