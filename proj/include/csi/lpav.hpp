#pragma once

#include <span>
#include <vector>

#include "csi/data_model.hpp"

namespace csi {

/// Piecewise-linear monotone 1-Lipschitz function: sorted distinct knots with
/// non-decreasing fitted values whose consecutive increments never exceed the
/// knot spacing. Constant extension beyond the first/last knot.
class MonotoneLink {
 public:
  MonotoneLink(std::vector<double> knots, std::vector<double> values);

  std::size_t num_knots() const noexcept { return knots_.size(); }
  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const double> fitted_values() const noexcept { return values_; }

  /// g(zeta): clamped at the boundary knots, linear in between. Evaluating at
  /// a knot returns the fitted value exactly.
  double eval(double zeta) const;

  /// Phi(zeta) = integral of g from 0 to zeta (so Phi(0) = 0), exact closed
  /// form: quadratic on each segment, linear beyond the boundary knots.
  double antiderivative(double zeta) const;

  friend bool operator==(const MonotoneLink&, const MonotoneLink&) = default;

 private:
  std::size_t segment_of(double zeta) const;
  double integral_from_first_knot(double u) const;

  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> cum_integral_;  // integral of g from knots_[0] to knots_[i]
};

/// Best monotone 1-Lipschitz fit of (p_i, y_i) in squared error:
///
///   minimize sum_i (z_i - y_i)^2
///   subject to 0 <= z_j - z_i <= p_j - p_i whenever p_i <= p_j.
///
/// After sorting, the pairwise constraints reduce to the consecutive chain
/// (the rest follow by telescoping). Tied p values force equal z and are
/// merged into one knot targeting the mean of the tied responses, with the
/// multiplicity as its weight. The chain QP is solved by Dykstra alternating
/// projections onto the two-variable constraint sets, iterated until the
/// normalized KKT residual drops below tol; throws after 10*n^2 sweeps
/// without convergence.
MonotoneLink lpav_fit(const Vector& p, const Vector& y, double tol = 1e-8);

/// Free-function form of MonotoneLink::eval.
double link_eval(const MonotoneLink& g, double zeta);

}  // namespace csi
