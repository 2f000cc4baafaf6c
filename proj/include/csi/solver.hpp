#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "csi/atoms.hpp"
#include "csi/data_model.hpp"
#include "csi/lpav.hpp"
#include "csi/model.hpp"

namespace csi {

struct TrainConfig {
  double eta = 1.0;               // step size, > 0
  double lambda = 0.0;            // ridge weight, >= 0
  std::size_t iterations = 50;    // T
  std::shared_ptr<const AtomicProjector> projector;  // required
  double lpav_tol = 1e-8;
  /// When > 0, stop once ||w_t - w_{t-1}|| / max(1, ||w_{t-1}||) drops below
  /// it. Off by default.
  double relative_stop_tol = 0.0;
  bool track_history = true;
  /// When set, the fit records ||w_t - reference_w||_2 per iteration.
  std::optional<Vector> reference_w;
};

/// Wall time spent per phase, summed over iterations. The link fit is
/// reported separately from the gradient/projection work so the per-iteration
/// scaling of the two can be examined independently.
struct PhaseTimings {
  double lpav_seconds = 0.0;
  double gradient_seconds = 0.0;
  double projection_seconds = 0.0;
};

struct FitReport {
  SimModel model;
  /// Calibrated empirical loss at (w_t, g_t), one entry per iteration run.
  std::vector<double> objective_trace;
  /// ||w_t - reference_w||_2 per iteration run (requires reference_w).
  std::vector<double> distance_trace;
  /// ||w_0 - reference_w||_2 at the initializer (NaN without reference_w).
  double initial_distance = 0.0;
  std::size_t iterations_run = 0;
  PhaseTimings timings;
};

/// Alternating fit: w_0 = P(X^T y); then per iteration fit the link on
/// (X w_{t-1}, y) with lpav_fit, take one gradient step on the calibrated
/// loss plus ridge, and project back onto the atom budget. The returned model
/// carries w_T with the link refit on X w_T so the shipped pair is
/// consistent. Throws when an iterate turns non-finite (step size too large),
/// naming the iteration.
FitReport csi_fit(const Dataset& ds, const TrainConfig& cfg);

/// (1/n) sum_i [Phi(w.x_i) - y_i * (w.x_i)] with Phi the exact antiderivative
/// of g, Phi(0) = 0.
double calibrated_loss(const Dataset& ds, const Vector& w, const MonotoneLink& g);

/// (1/n) sum_i (g(w.x_i) - y_i) x_i + lambda * w
Vector gradient(const Dataset& ds, const Vector& w, const MonotoneLink& g,
                double lambda);

}  // namespace csi
