#include "csi/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "csi/kernels.hpp"

namespace csi {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_finite_iterate(std::span<const double> w, const char* stage,
                            std::size_t iteration) {
  for (double v : w) {
    if (!std::isfinite(v))
      throw std::runtime_error(std::string("csi_fit: non-finite iterate after ") +
                               stage + " at iteration " + std::to_string(iteration) +
                               " (step size too large?)");
  }
}

std::vector<double> matvec_raw(const FeatureMatrix& m, std::span<const double> w) {
  std::vector<double> out(m.rows());
  if (m.is_sparse()) {
    kernels::active::sparse_matvec(m.row_offsets().data(), m.indices().data(),
                                   m.sparse_values().data(), m.rows(), w.data(),
                                   out.data());
  } else {
    kernels::active::dense_matvec(m.dense_values().data(), m.rows(), m.cols(),
                                  w.data(), out.data());
  }
  return out;
}

std::vector<double> tmatvec_raw(const FeatureMatrix& m, std::span<const double> v) {
  std::vector<double> out(m.cols());
  if (m.is_sparse()) {
    kernels::active::sparse_tmatvec(m.row_offsets().data(), m.indices().data(),
                                    m.sparse_values().data(), m.rows(), m.cols(),
                                    v.data(), out.data());
  } else {
    kernels::active::dense_tmatvec(m.dense_values().data(), m.rows(), m.cols(),
                                   v.data(), out.data());
  }
  return out;
}

// residual_i = g(p_i) - y_i; elementwise, safe to parallelize.
std::vector<double> link_residuals(const MonotoneLink& g, std::span<const double> p,
                                   std::span<const double> y) {
  const std::size_t n = p.size();
  std::vector<double> r(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < n; ++i) r[i] = g.eval(p[i]) - y[i];
  return r;
}

// grad = X^T r / n + lambda * w
std::vector<double> loss_gradient_raw(const FeatureMatrix& x,
                                      std::span<const double> residuals,
                                      std::span<const double> w, double lambda) {
  std::vector<double> grad = tmatvec_raw(x, residuals);
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  const std::size_t d = grad.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t j = 0; j < d; ++j) grad[j] = grad[j] * inv_n + lambda * w[j];
  return grad;
}

double calibrated_loss_raw(const MonotoneLink& g, std::span<const double> p,
                           std::span<const double> y) {
  const std::size_t n = p.size();
  std::vector<double> terms(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < n; ++i)
    terms[i] = g.antiderivative(p[i]) - y[i] * p[i];
  // Fixed-order sum: results must not depend on the thread count.
  double acc = 0.0;
  for (double t : terms) acc += t;
  return acc / static_cast<double>(n);
}

double distance_to(std::span<const double> w, std::span<const double> ref) {
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double dlt = w[j] - ref[j];
    acc += dlt * dlt;
  }
  return std::sqrt(acc);
}

}  // namespace

double calibrated_loss(const Dataset& ds, const Vector& w, const MonotoneLink& g) {
  if (w.size() != ds.dim())
    throw std::invalid_argument("calibrated_loss: dimension mismatch");
  const std::vector<double> p = matvec_raw(ds.features(), w.values());
  return calibrated_loss_raw(g, p, ds.responses().values());
}

Vector gradient(const Dataset& ds, const Vector& w, const MonotoneLink& g,
                double lambda) {
  if (w.size() != ds.dim())
    throw std::invalid_argument("gradient: dimension mismatch");
  const std::vector<double> p = matvec_raw(ds.features(), w.values());
  const std::vector<double> r = link_residuals(g, p, ds.responses().values());
  return Vector(loss_gradient_raw(ds.features(), r, w.values(), lambda));
}

FitReport csi_fit(const Dataset& ds, const TrainConfig& cfg) {
  if (!cfg.projector) throw std::invalid_argument("csi_fit: no projector configured");
  if (ds.size() == 0) throw std::invalid_argument("csi_fit: empty dataset");
  if (cfg.projector->dim() != ds.dim())
    throw std::invalid_argument("csi_fit: projector dimension " +
                                std::to_string(cfg.projector->dim()) +
                                " does not match data dimension " +
                                std::to_string(ds.dim()));
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("csi_fit: eta must be positive");
  if (cfg.lambda < 0.0) throw std::invalid_argument("csi_fit: lambda must be >= 0");
  if (cfg.iterations == 0) throw std::invalid_argument("csi_fit: iterations must be >= 1");
  if (cfg.reference_w && cfg.reference_w->size() != ds.dim())
    throw std::invalid_argument("csi_fit: reference_w dimension mismatch");

  const FeatureMatrix& x = ds.features();
  const std::size_t n = ds.size();
  const std::size_t d = ds.dim();
  std::span<const double> y = ds.responses().values();

  PhaseTimings timings;

  // w_0 = P(X^T y / n): the correlation initializer on the same 1/n scale as
  // the loss gradient (it equals minus the gradient at w = 0 under the zero
  // link). The projection is positively homogeneous, so only the scale
  // differs from P(X^T y); without the normalization the initializer sits at
  // ~n times the signal norm and no stable step size can close that gap.
  std::vector<double> w;
  {
    const auto t0 = Clock::now();
    std::vector<double> xty = tmatvec_raw(x, y);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (double& v : xty) v *= inv_n;
    std::vector<double> projected = cfg.projector->project_values(xty);
    timings.projection_seconds += seconds_since(t0);
    w = std::move(projected);
  }
  require_finite_iterate(w, "initialization", 0);

  FitReport report{SimModel(Vector::zeros(1), MonotoneLink({0.0}, {0.0})), {}, {}, 0,
                   0, {}};
  report.initial_distance = cfg.reference_w
                                ? distance_to(w, cfg.reference_w->values())
                                : std::numeric_limits<double>::quiet_NaN();

  std::vector<double> p(n);
  std::optional<MonotoneLink> link;

  for (std::size_t t = 1; t <= cfg.iterations; ++t) {
    p = matvec_raw(x, w);
    require_finite_iterate(p, "projection onto data", t);

    {
      const auto t0 = Clock::now();
      link = lpav_fit(Vector(p), ds.responses(), cfg.lpav_tol);
      timings.lpav_seconds += seconds_since(t0);
    }

    std::vector<double> w_next;
    {
      const auto t0 = Clock::now();
      const std::vector<double> r = link_residuals(*link, p, y);
      const std::vector<double> grad = loss_gradient_raw(x, r, w, cfg.lambda);
      std::vector<double> w_tilde(d);
      kernels::active::axpy(w, -cfg.eta, grad, w_tilde.data());
      timings.gradient_seconds += seconds_since(t0);

      const auto t1 = Clock::now();
      w_next = cfg.projector->project_values(w_tilde);
      timings.projection_seconds += seconds_since(t1);
    }
    require_finite_iterate(w_next, "gradient step", t);

    double rel_change = 0.0;
    if (cfg.relative_stop_tol > 0.0) {
      double diff = 0.0, base = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double dlt = w_next[j] - w[j];
        diff += dlt * dlt;
        base += w[j] * w[j];
      }
      rel_change = std::sqrt(diff) / std::max(1.0, std::sqrt(base));
    }

    w = std::move(w_next);
    ++report.iterations_run;

    if (cfg.track_history) {
      const std::vector<double> p_next = matvec_raw(x, w);
      report.objective_trace.push_back(calibrated_loss_raw(*link, p_next, y));
      if (cfg.reference_w)
        report.distance_trace.push_back(distance_to(w, cfg.reference_w->values()));
    }

    if (cfg.relative_stop_tol > 0.0 && rel_change < cfg.relative_stop_tol) break;
  }

  // Refit the link on X w_T so the shipped pair is consistent; the loop's
  // last link was fit on the pre-projection iterate.
  p = matvec_raw(x, w);
  {
    const auto t0 = Clock::now();
    link = lpav_fit(Vector(p), ds.responses(), cfg.lpav_tol);
    timings.lpav_seconds += seconds_since(t0);
  }

  report.model = SimModel(Vector(std::move(w)), std::move(*link));
  report.timings = timings;
  return report;
}

}  // namespace csi
