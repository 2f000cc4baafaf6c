#include "csi/synth.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "csi/atoms.hpp"
#include "csi/rng.hpp"
#include "csi/solver.hpp"

namespace csi {

double logistic_link(double t) { return 2.0 / (1.0 + std::exp(-t)) - 1.0; }

SynthData generate(const SynthSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("generate: n must be >= 1");
  if (spec.d == 0) throw std::invalid_argument("generate: d must be >= 1");
  if (spec.k > spec.d) throw std::invalid_argument("generate: k must be <= d");
  if (spec.link == SynthLink::kCustom && !spec.custom_link)
    throw std::invalid_argument("generate: custom link not provided");

  std::function<double(double)> g;
  std::string g_name;
  switch (spec.link) {
    case SynthLink::kLogistic:
      g = logistic_link;
      g_name = "logistic";
      break;
    case SynthLink::kLinear:
      g = [](double t) { return t; };
      g_name = "linear";
      break;
    case SynthLink::kCustom: {
      MonotoneLink link = *spec.custom_link;
      g = [link](double t) { return link.eval(t); };
      g_name = "custom";
      break;
    }
  }

  Rng rng(spec.seed);

  // Support: partial Fisher-Yates over 0..d-1 picks k positions.
  std::vector<std::size_t> positions(spec.d);
  for (std::size_t i = 0; i < spec.d; ++i) positions[i] = i;
  std::vector<double> w_star(spec.d, 0.0);
  for (std::size_t i = 0; i < spec.k; ++i) {
    const std::size_t j = i + rng.integer(spec.d - i);
    std::swap(positions[i], positions[j]);
  }
  for (std::size_t i = 0; i < spec.k; ++i) w_star[positions[i]] = rng.normal();

  std::vector<double> x(spec.n * spec.d);
  for (double& v : x) v = rng.normal();

  std::vector<double> y(spec.n);
  ResponseKind kind = ResponseKind::kRegression;
  for (std::size_t i = 0; i < spec.n; ++i) {
    double index = 0.0;
    for (std::size_t j = 0; j < spec.d; ++j) index += x[i * spec.d + j] * w_star[j];
    const double mean = g(index);
    if (spec.noise == LabelMechanism::kBernoulli) {
      kind = ResponseKind::kBinaryClassification;
      const double p_plus = 0.5 * (1.0 + mean);
      y[i] = rng.uniform() <= p_plus ? 1.0 : -1.0;
    } else {
      y[i] = mean;
    }
  }

  Dataset ds(FeatureMatrix::dense(spec.n, spec.d, std::move(x)),
             Vector(std::move(y)), kind);
  return SynthData{std::move(ds), Vector(std::move(w_star)), std::move(g),
                   std::move(g_name)};
}

ConvergenceResult convergence_experiment(const std::vector<std::size_t>& dims,
                                         std::uint64_t seed,
                                         const ConvergenceOptions& opts) {
  if (dims.empty())
    throw std::invalid_argument("convergence_experiment: no dimensions given");
  if (opts.etas.empty())
    throw std::invalid_argument("convergence_experiment: empty step-size grid");
  for (std::size_t d : dims)
    if (d < 4) throw std::invalid_argument("convergence_experiment: d must be >= 4");

  ConvergenceResult result;
  for (std::size_t d : dims) {
    const auto k = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d))));
    const std::size_t s = std::min(5 * k, d);

    SynthSpec spec;
    spec.n = opts.n;
    spec.d = d;
    spec.k = k;
    spec.link = SynthLink::kLogistic;
    spec.noise = LabelMechanism::kBernoulli;
    spec.seed = derive_stream_seed(seed, d);
    const SynthData synth = generate(spec);

    ConvergenceRun best;
    best.d = d;
    best.final_distance = std::numeric_limits<double>::infinity();

    for (double eta : opts.etas) {
      TrainConfig cfg;
      cfg.eta = eta;
      cfg.lambda = opts.lambda;
      cfg.iterations = opts.iterations;
      cfg.projector = std::make_shared<SparseProjector>(d, s);
      cfg.track_history = true;
      cfg.reference_w = synth.w_star;
      try {
        FitReport report = csi_fit(synth.data, cfg);
        const double final_distance = report.distance_trace.back();
        if (final_distance < best.final_distance) {
          best.best_eta = eta;
          best.initial_distance = report.initial_distance;
          best.final_distance = final_distance;
          best.distances = report.distance_trace;
        }
      } catch (const std::runtime_error&) {
        // Divergent step size; skip it.
      }
    }
    if (best.distances.empty())
      throw std::runtime_error("convergence_experiment: every step size diverged for d=" +
                               std::to_string(d));

    for (std::size_t t = 0; t < best.distances.size(); ++t)
      result.trace.push_back(ConvergenceTraceRow{d, t + 1, best.distances[t]});
    result.runs.push_back(std::move(best));
  }
  return result;
}

}  // namespace csi
