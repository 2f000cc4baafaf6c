#include "csi/lpav.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace csi {

namespace {

// Validation slack for the link invariants: one ulp of rounding in the final
// feasibility pass must not be rejected.
constexpr double kInvariantSlack = 1e-12;

}  // namespace

MonotoneLink::MonotoneLink(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.empty()) throw std::invalid_argument("MonotoneLink: no knots");
  if (knots_.size() != values_.size())
    throw std::invalid_argument("MonotoneLink: knots/values size mismatch");
  for (double v : knots_)
    if (!std::isfinite(v)) throw std::invalid_argument("MonotoneLink: non-finite knot");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("MonotoneLink: non-finite value");
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    const double gap = knots_[i + 1] - knots_[i];
    if (!(gap > 0.0))
      throw std::invalid_argument("MonotoneLink: knots not strictly increasing");
    const double step = values_[i + 1] - values_[i];
    const double slack = kInvariantSlack * std::max({1.0, std::abs(values_[i]), gap});
    if (step < -slack)
      throw std::invalid_argument("MonotoneLink: values not non-decreasing");
    if (step - gap > slack)
      throw std::invalid_argument("MonotoneLink: values violate the 1-Lipschitz bound");
  }
  // Cumulative exact integrals over each linear segment (trapezoid).
  cum_integral_.resize(knots_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    const double gap = knots_[i + 1] - knots_[i];
    cum_integral_[i + 1] =
        cum_integral_[i] + 0.5 * (values_[i] + values_[i + 1]) * gap;
  }
}

std::size_t MonotoneLink::segment_of(double zeta) const {
  // Largest i with knots_[i] <= zeta; caller handles the boundary clamps.
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), zeta);
  return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

double MonotoneLink::eval(double zeta) const {
  if (zeta <= knots_.front()) return values_.front();
  if (zeta >= knots_.back()) return values_.back();
  const std::size_t i = segment_of(zeta);
  if (zeta == knots_[i]) return values_[i];
  const double gap = knots_[i + 1] - knots_[i];
  const double slope = (values_[i + 1] - values_[i]) / gap;
  return values_[i] + slope * (zeta - knots_[i]);
}

double MonotoneLink::integral_from_first_knot(double u) const {
  if (u <= knots_.front()) return values_.front() * (u - knots_.front());
  if (u >= knots_.back()) return cum_integral_.back() + values_.back() * (u - knots_.back());
  const std::size_t i = segment_of(u);
  const double t = u - knots_[i];
  const double gap = knots_[i + 1] - knots_[i];
  const double slope = (values_[i + 1] - values_[i]) / gap;
  return cum_integral_[i] + values_[i] * t + 0.5 * slope * t * t;
}

double MonotoneLink::antiderivative(double zeta) const {
  return integral_from_first_knot(zeta) - integral_from_first_knot(0.0);
}

double link_eval(const MonotoneLink& g, double zeta) { return g.eval(zeta); }

namespace {

struct Chain {
  std::vector<double> knot;    // strictly increasing
  std::vector<double> target;  // mean of tied responses
  std::vector<double> weight;  // tie multiplicity
};

Chain merge_ties(std::span<const double> p, std::span<const double> y) {
  const std::size_t n = p.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });

  Chain c;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < n && p[order[j]] == p[order[i]]) {
      sum += y[order[j]];
      ++j;
    }
    c.knot.push_back(p[order[i]]);
    c.target.push_back(sum / static_cast<double>(j - i));
    c.weight.push_back(static_cast<double>(j - i));
    i = j;
  }
  return c;
}

// KKT residual of the weighted chain QP at z. Multipliers are recovered by the
// stationarity recursion s_j = s_{j-1} - 2 w_j (z_j - t_j); optimality is
// feasibility + complementarity of the recovered multipliers + s_m = 0.
// Everything is normalized by 2*(total weight) so tol is scale-meaningful.
double kkt_residual(const Chain& c, std::span<const double> z) {
  const std::size_t m = z.size();
  const double norm = 2.0 * std::accumulate(c.weight.begin(), c.weight.end(), 0.0);
  double feas = 0.0;
  double comp = 0.0;
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    s -= 2.0 * c.weight[j] * (z[j] - c.target[j]);
    if (j + 1 < m) {
      const double gap = z[j + 1] - z[j];
      const double width = c.knot[j + 1] - c.knot[j];
      feas = std::max({feas, -gap, gap - width});
      const double sn = s / norm;
      comp = std::max(comp, std::max(sn, 0.0) * std::max(gap, 0.0));
      comp = std::max(comp, std::max(-sn, 0.0) * std::max(width - gap, 0.0));
    }
  }
  return std::max({feas, comp, std::abs(s / norm)});
}

}  // namespace

MonotoneLink lpav_fit(const Vector& p, const Vector& y, double tol) {
  const std::size_t n = p.size();
  if (n == 0) throw std::invalid_argument("lpav_fit: empty input");
  if (y.size() != n)
    throw std::invalid_argument("lpav_fit: p has length " + std::to_string(n) +
                                ", y has length " + std::to_string(y.size()));
  if (!(tol > 0.0)) throw std::invalid_argument("lpav_fit: tol must be positive");

  Chain c = merge_ties(p.values(), y.values());
  const std::size_t m = c.knot.size();
  std::vector<double> z = c.target;

  if (m > 1) {
    // Dykstra alternating projections onto the m-1 two-variable slabs
    // {(z_j, z_{j+1}) : 0 <= z_{j+1} - z_j <= width_j} in the
    // weight-induced inner product.
    std::vector<double> corr_lo(m - 1, 0.0), corr_hi(m - 1, 0.0);
    const std::size_t max_sweeps = 10 * n * n;
    bool converged = false;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
      for (std::size_t j = 0; j + 1 < m; ++j) {
        const double a = z[j] + corr_lo[j];
        const double b = z[j + 1] + corr_hi[j];
        const double width = c.knot[j + 1] - c.knot[j];
        double na = a, nb = b;
        const double gap = b - a;
        if (gap < 0.0 || gap > width) {
          const double bound = gap < 0.0 ? 0.0 : width;
          const double wa = c.weight[j], wb = c.weight[j + 1];
          na = (wa * a + wb * (b - bound)) / (wa + wb);
          nb = na + bound;
        }
        corr_lo[j] = a - na;
        corr_hi[j] = b - nb;
        z[j] = na;
        z[j + 1] = nb;
      }
      if (kkt_residual(c, z) < tol) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("lpav_fit: no convergence after " +
                               std::to_string(max_sweeps) + " sweeps (tol " +
                               std::to_string(tol) + ")");

    // Round the tol-feasible iterate onto the exact constraint set so the
    // MonotoneLink invariants hold without slack.
    for (std::size_t j = 0; j + 1 < m; ++j) {
      const double width = c.knot[j + 1] - c.knot[j];
      z[j + 1] = std::clamp(z[j + 1], z[j], z[j] + width);
    }
  }

  return MonotoneLink(std::move(c.knot), std::move(z));
}

}  // namespace csi
