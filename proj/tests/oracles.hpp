#pragma once

// Test-only oracles. Each one takes an independent route from the library
// implementation it checks: the link-fit oracle runs projected gradient on
// the dual of the dense pairwise QP, the projection oracles enumerate atom
// subsets or call a full SVD, and the AUC oracle counts pairs directly.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracles {

// ---- LPAV: dense pairwise QP via dual projected gradient (FISTA) ----------

struct PairwiseConstraint {
  std::size_t i, j;  // z_i - z_j <= bound
  double bound;
};

inline std::vector<PairwiseConstraint> all_pairwise_constraints(
    const std::vector<double>& p) {
  std::vector<PairwiseConstraint> rows;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (p[i] <= p[j]) {
        rows.push_back({i, j, 0.0});              // z_i - z_j <= 0
        rows.push_back({j, i, p[j] - p[i]});      // z_j - z_i <= p_j - p_i
      }
    }
  return rows;
}

/// Minimizer of sum (z_i - y_i)^2 subject to every pairwise constraint,
/// via accelerated projected gradient on the dual, run to kkt_tol.
inline std::vector<double> lpav_qp_oracle(const std::vector<double>& p,
                                          const std::vector<double>& y,
                                          double kkt_tol = 1e-9,
                                          std::size_t max_iters = 4000000) {
  const std::size_t n = p.size();
  const auto rows = all_pairwise_constraints(p);
  const std::size_t m = rows.size();
  if (m == 0) return y;

  // Objective here is (1/2)||z - y||^2 so z(mu) = y - A^T mu; the caller's
  // sum-of-squares objective is just twice it.
  const double lip = 2.0 * static_cast<double>(m);  // ||A||_F^2 bounds ||AA^T||
  const double step = 1.0 / lip;
  double scale = 1.0;
  for (double v : y) scale = std::max(scale, std::abs(v));

  std::vector<double> mu(m, 0.0), mu_prev(m, 0.0), extr(m, 0.0);
  std::vector<double> z(n);
  double t_acc = 1.0;

  auto compute_z = [&](const std::vector<double>& multipliers) {
    std::copy(y.begin(), y.end(), z.begin());
    for (std::size_t r = 0; r < m; ++r) {
      z[rows[r].i] -= multipliers[r];
      z[rows[r].j] += multipliers[r];
    }
  };

  for (std::size_t it = 0; it < max_iters; ++it) {
    compute_z(extr);
    mu_prev = mu;
    for (std::size_t r = 0; r < m; ++r) {
      const double slack = z[rows[r].i] - z[rows[r].j] - rows[r].bound;
      mu[r] = std::max(0.0, extr[r] + step * slack);
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_acc * t_acc));
    const double gamma = (t_acc - 1.0) / t_next;
    for (std::size_t r = 0; r < m; ++r)
      extr[r] = mu[r] + gamma * (mu[r] - mu_prev[r]);
    t_acc = t_next;

    if (it % 32 == 0) {
      compute_z(mu);
      double feas = 0.0, comp = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        const double slack = z[rows[r].i] - z[rows[r].j] - rows[r].bound;
        feas = std::max(feas, slack);
        comp = std::max(comp, std::abs(mu[r] * slack));
      }
      if (feas <= kkt_tol * scale && comp <= kkt_tol * scale * scale) return z;
    }
  }
  throw std::runtime_error("lpav_qp_oracle: no convergence");
}

inline double sum_squared_error(const std::vector<double>& z,
                                const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) acc += (z[i] - y[i]) * (z[i] - y[i]);
  return acc;
}

/// Worst violation of 0 <= z_j - z_i <= p_j - p_i over all pairs with p_i <= p_j.
inline double pairwise_violation(const std::vector<double>& p,
                                 const std::vector<double>& z) {
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[i] > p[j]) continue;
      const double gap = z[j] - z[i];
      worst = std::max({worst, -gap, gap - (p[j] - p[i])});
    }
  return worst;
}

// ---- AUC: brute-force pair counting ----------------------------------------

inline double auc_pair_counting(const std::vector<double>& scores,
                                const std::vector<double>& labels) {
  double wins = 0.0, ties = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1.0) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != -1.0) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      if (scores[i] == scores[j]) ties += 1.0;
    }
  }
  return (wins + 0.5 * ties) / static_cast<double>(pairs);
}

// ---- Projections: subset enumeration and full SVD ---------------------------

/// Smallest ||w - v||^2 over vectors v supported on at most s coordinates.
inline double best_sparse_distance_sq(const std::vector<double>& w, std::size_t s) {
  const std::size_t d = w.size();
  if (s >= d) return 0.0;
  double best = 1e300;
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > s) continue;
    double dist = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      if (!(mask & (1u << i))) dist += w[i] * w[i];
    best = std::min(best, dist);
  }
  return best;
}

/// Same over unions of at most s groups.
inline double best_group_distance_sq(const std::vector<double>& w,
                                     const std::vector<std::vector<std::size_t>>& groups,
                                     std::size_t s) {
  const std::size_t g = groups.size();
  if (s >= g) return 0.0;
  double best = 1e300;
  for (std::uint32_t mask = 0; mask < (1u << g); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > s) continue;
    double dist = 0.0;
    for (std::size_t gi = 0; gi < g; ++gi)
      if (!(mask & (1u << gi)))
        for (std::size_t idx : groups[gi]) dist += w[idx] * w[idx];
    best = std::min(best, dist);
  }
  return best;
}

/// Best rank-s approximation via Eigen's full SVD (row-major flattening).
inline std::vector<double> svd_truncate(const std::vector<double>& w, std::size_t rows,
                                        std::size_t cols, std::size_t s) {
  Eigen::MatrixXd a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w[i * cols + j];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto rank = std::min<Eigen::Index>(static_cast<Eigen::Index>(s),
                                           svd.singularValues().size());
  Eigen::MatrixXd trunc = svd.matrixU().leftCols(rank) *
                          svd.singularValues().head(rank).asDiagonal() *
                          svd.matrixV().leftCols(rank).transpose();
  std::vector<double> out(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      out[i * cols + j] = trunc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

inline double dist_sq(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return acc;
}

// ---- Numeric quadrature / finite differences --------------------------------

/// Trapezoid integral of f over [a,b] with many panels; used to cross-check
/// closed-form antiderivatives.
template <typename F>
double trapezoid(F f, double a, double b, std::size_t panels = 200000) {
  const double h = (b - a) / static_cast<double>(panels);
  double acc = 0.5 * (f(a) + f(b));
  for (std::size_t k = 1; k < panels; ++k) acc += f(a + h * static_cast<double>(k));
  return acc * h;
}

}  // namespace oracles
