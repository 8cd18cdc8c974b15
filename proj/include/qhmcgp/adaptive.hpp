#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qhmcgp/constraints.hpp"
#include "qhmcgp/gp_model.hpp"
#include "qhmcgp/rng.hpp"
#include "qhmcgp/sampler.hpp"

namespace qhmcgp {

enum class Strategy { ConstraintAdaptive, VarianceAdaptive, Combined };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

struct AdaptiveConfig {
  Strategy strategy = Strategy::Combined;
  int max_constraints = 20;
  Matrix candidate_grid;
  double variance_threshold = 0.20;
  Matrix initial_constraints;  // rows are seed locations; may be empty

  void validate() const;
};

/// Latin-hypercube design of n points in [lower, upper]^dim.
Matrix latin_hypercube(int n, int dim, double lower, double upper, Rng& rng);

struct Selection {
  std::optional<Eigen::Index> index;  // candidate row, or nothing to add
  double score = 0.0;                 // variance or margin that decided the pick
  bool by_variance = false;
};

/// Next constraint location among candidates not yet taken.
///
/// Constraint rule: most negative margin, nothing if none is negative.
/// Variance rule: largest latent predictive variance. Combined: variance rule
/// while the largest remaining variance exceeds `variance_threshold`, then the
/// constraint rule. Ties go to the lowest candidate index.
Selection select_point(Strategy strategy, const GpFit& fit, const ConstraintSet& cset,
                       const Matrix& candidate_grid, const std::vector<bool>& taken,
                       double variance_threshold);

/// Per-candidate scores used by select_point.
Vector candidate_variances(const GpFit& fit, const Matrix& candidate_grid);
Vector candidate_margins(const GpFit& fit, const ConstraintSet& cset, const Matrix& candidate_grid);

struct TraceRecord {
  int step = 0;
  int n_constraints = 0;
  double rel_error = 0.0;             // working (minimum-potential) hyperparameters
  double rel_error_chain_mean = 0.0;  // posterior mean averaged over thinned chain samples
  double mean_post_var = 0.0;
  double acceptance_rate = 0.0;
  Hyperparams hyper;
  Vector added_location;  // point added before this step's training; empty at step 0
  double selection_score = 0.0;
  double true_margin = 0.0;  // truth - bound (or min true slope) at the added point; NaN if unknown
};

using AdaptiveTrace = std::vector<TraceRecord>;

/// Held-out inputs and their noise-free target values.
struct TestSet {
  Matrix X;
  Vector truth;
};

using TruthFn = std::function<double(const Vector&)>;

struct AdaptiveResult {
  Hyperparams hyper;
  ConstraintSet constraints;
  AdaptiveTrace trace;
  double acceptance_rate = 0.0;  // of the final chain
};

/// Starting hyperparameters derived from the data scale.
Hyperparams initial_hyperparams(const Dataset& data);

/// Grows the constraint set one point at a time, retraining by QHMC after each addition.
///
/// Each step warm-starts the chain at the previous working hyperparameters and
/// keeps the minimum-potential sample. Stops at max_constraints or when the
/// strategy has nothing to add. `truth`, when given, is only used for logging.
AdaptiveResult adaptive_train(const Dataset& data, const QhmcConfig& qhmc, const ConstraintSet& cset_template,
                              const AdaptiveConfig& adaptive, const TestSet& test_set,
                              const TruthFn& truth = {});

}  // namespace qhmcgp
