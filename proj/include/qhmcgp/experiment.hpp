#pragma once

#include <string>
#include <vector>

#include "qhmcgp/adaptive.hpp"
#include "qhmcgp/bench.hpp"
#include "qhmcgp/sampler.hpp"

namespace qhmcgp {

/// Everything needed to run one benchmark cell.
///
/// `method` is a preset label that fixes the constraint mode, strategy and
/// sampler family: "unconstrained", "QHMC-ad", "QHMC-soft-ad", "QHMC-var",
/// "QHMC-soft-var", "QHMC-both", "QHMC-soft-both", the same six with an
/// "HMC-" prefix (fixed mass, sigma_m = 0), or "custom" to use the explicit
/// mode and strategy fields as given.
struct ExperimentSettings {
  std::string experiment_id;
  std::string method = "QHMC-both";
  BenchmarkSpec bench;
  QhmcConfig qhmc;
  ConstraintMode mode = ConstraintMode::Hard;
  Strategy strategy = Strategy::Combined;
  int max_constraints = 20;
  int n_candidates = 512;
  double variance_threshold = 0.20;
  double eta = 0.022;
  double penalty_weight = 100.0;
  std::vector<int> active_dims;  // monotone only; empty means every dimension
  Matrix initial_constraints;

  void validate() const;
};

std::vector<std::string> known_methods();

/// Copy of `settings` with the method preset applied.
ExperimentSettings apply_method(ExperimentSettings settings);

struct ExperimentReport {
  std::string experiment_id;
  std::string method;
  BenchmarkSpec spec;
  double rel_error = 0.0;
  double rel_error_chain_mean = 0.0;
  double mean_posterior_variance = 0.0;
  double wall_time_s = 0.0;
  double acceptance_rate = 0.0;
  int n_constraints_final = 0;
  Hyperparams hyper;
  ConstraintSet constraints;
  AdaptiveTrace trace;
};

/// Dataset, candidate grid and adaptive training for one cell. Everything but
/// wall_time_s is a deterministic function of the settings.
ExperimentReport run_experiment(const ExperimentSettings& settings);

/// Dataset a given settings object trains on (same seed stream as run_experiment).
BenchmarkData experiment_data(const ExperimentSettings& settings);

}  // namespace qhmcgp
