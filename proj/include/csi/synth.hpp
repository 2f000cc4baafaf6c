#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csi/data_model.hpp"
#include "csi/lpav.hpp"

namespace csi {

enum class SynthLink { kLogistic, kLinear, kCustom };
enum class LabelMechanism {
  kBernoulli,      // y in {-1,+1}, P(y=+1) = (1 + g(w*.x)) / 2
  kExpectedValue,  // y = g(w*.x), noiseless regression
};

struct SynthSpec {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t k = 0;  // sparsity of w*, k <= d
  SynthLink link = SynthLink::kLogistic;
  std::optional<MonotoneLink> custom_link;  // required when link == kCustom
  LabelMechanism noise = LabelMechanism::kBernoulli;
  std::uint64_t seed = 0;
};

struct SynthData {
  Dataset data;
  Vector w_star;
  std::function<double(double)> g_star;
  std::string g_star_name;
};

/// Rescaled logistic: 2 / (1 + e^-t) - 1, odd, monotone, 1/2-Lipschitz,
/// range (-1, 1).
double logistic_link(double t);

/// Standard-normal covariates, k-sparse w* with N(0,1) entries at uniformly
/// random positions, labels via the chosen mechanism. Fully determined by the
/// seed (mt19937_64 + Box-Muller; draws: w* positions, w* values, covariates
/// row-major, then label noise).
SynthData generate(const SynthSpec& spec);

struct ConvergenceTraceRow {
  std::size_t d = 0;
  std::size_t t = 0;  // 1-based iteration
  double distance = 0.0;
};

struct ConvergenceRun {
  std::size_t d = 0;
  double best_eta = 0.0;
  double initial_distance = 0.0;
  double final_distance = 0.0;
  std::vector<double> distances;  // per iteration at the best eta
};

struct ConvergenceResult {
  std::vector<ConvergenceRun> runs;    // one per dimension, input order
  std::vector<ConvergenceTraceRow> trace;  // flattened rows for the CSV
};

struct ConvergenceOptions {
  std::size_t n = 500;
  std::size_t iterations = 50;
  double lambda = 1e-3;
  // Small steps cannot move the unnormalized initializer P(X^T y) far enough
  // within T iterations; steps beyond 16 leave the smooth transient and
  // oscillate. The grid spans both ends, best final distance wins.
  std::vector<double> etas = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
};

/// Per-dimension recovery experiment: n = 500 samples, k = round(sqrt(d)),
/// s = 5k, lambda = 1e-3, T = 50 by default; Bernoulli labels through the
/// logistic link. Sweeps the step sizes and keeps, per dimension, the run
/// with the smallest final ||w_t - w*||; step sizes that diverge are skipped.
/// Each dimension draws from its own generator stream derived from the seed.
ConvergenceResult convergence_experiment(const std::vector<std::size_t>& dims,
                                         std::uint64_t seed,
                                         const ConvergenceOptions& opts = {});

}  // namespace csi
