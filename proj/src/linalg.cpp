#include "csi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace csi::linalg {

DenseMat matmul(const DenseMat& a, const DenseMat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: shape mismatch");
  DenseMat c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a.at(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

DenseMat transpose(const DenseMat& a) {
  DenseMat t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

double frob_dist(const DenseMat& a, const DenseMat& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("frob_dist: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double dlt = a.data[i] - b.data[i];
    acc += dlt * dlt;
  }
  return std::sqrt(acc);
}

namespace {

double col_norm(const DenseMat& m, std::size_t j) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) acc += m.at(i, j) * m.at(i, j);
  return std::sqrt(acc);
}

void orthogonalize_against(DenseMat& m, std::size_t target, std::size_t basis) {
  double proj = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) proj += m.at(i, basis) * m.at(i, target);
  for (std::size_t i = 0; i < m.rows; ++i) m.at(i, target) -= proj * m.at(i, basis);
}

}  // namespace

DenseMat mgs_orthonormalize(DenseMat q, double drop_tol) {
  std::vector<std::size_t> kept;
  double scale = 0.0;
  for (std::size_t j = 0; j < q.cols; ++j) scale = std::max(scale, col_norm(q, j));
  if (scale == 0.0) return DenseMat(q.rows, 0);

  DenseMat out(q.rows, q.cols);
  std::size_t nkept = 0;
  for (std::size_t j = 0; j < q.cols; ++j) {
    for (std::size_t i = 0; i < q.rows; ++i) out.at(i, nkept) = q.at(i, j);
    for (std::size_t pass = 0; pass < 2; ++pass)
      for (std::size_t b = 0; b < nkept; ++b) orthogonalize_against(out, nkept, b);
    const double nrm = col_norm(out, nkept);
    if (nrm <= drop_tol * scale) continue;  // dependent column
    for (std::size_t i = 0; i < q.rows; ++i) out.at(i, nkept) /= nrm;
    ++nkept;
  }
  DenseMat trimmed(q.rows, nkept);
  for (std::size_t i = 0; i < q.rows; ++i)
    for (std::size_t j = 0; j < nkept; ++j) trimmed.at(i, j) = out.at(i, j);
  return trimmed;
}

SymEig jacobi_eigh(DenseMat a, std::size_t max_sweeps, double tol) {
  if (a.rows != a.cols) throw std::invalid_argument("jacobi_eigh: matrix not square");
  const std::size_t n = a.rows;

  DenseMat v(n, n);
  for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a.at(i, j)));
  if (scale == 0.0) scale = 1.0;

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a.at(p, q)));
    if (off <= tol * scale) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (std::abs(apq) <= tol * scale * 1e-3) continue;
        const double app = a.at(p, p);
        const double aqq = a.at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a.at(k, p), akq = a.at(k, q);
          a.at(k, p) = c * akp - s * akq;
          a.at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a.at(p, k), aqk = a.at(q, k);
          a.at(p, k) = c * apk - s * aqk;
          a.at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v.at(k, p), vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a.at(i, i) > a.at(j, j);
  });

  SymEig out;
  out.values.resize(n);
  out.vectors = DenseMat(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a.at(src, src);
    double colmax = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      colmax = std::max(colmax, std::abs(v.at(i, src)));
    double sign = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v.at(i, src)) > 1e-12 * colmax) {
        sign = v.at(i, src) > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) out.vectors.at(i, k) = sign * v.at(i, src);
  }
  return out;
}

}  // namespace csi::linalg
