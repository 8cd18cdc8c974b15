#pragma once

#include <cstdint>
#include <string>

#include "qhmcgp/constraints.hpp"
#include "qhmcgp/gp_model.hpp"
#include "qhmcgp/rng.hpp"

namespace qhmcgp {

/// Synthetic regression problem: target function, domain box, sizes, noise.
///
/// The domain is the same interval [lower, upper] in every dimension.
struct BenchmarkSpec {
  std::string function_name = "arctan2d";
  int dim = 2;
  double lower = 0.0;
  double upper = 1.0;
  int n_train = 20;
  int n_test = 1000;
  double snr_percent = 0.0;
  ConstraintKind constraint_kind = ConstraintKind::ValueLowerBound;
  double bound = 0.0;
  std::uint64_t seed = 0;

  /// Reference settings for a named function (domain, dim, constraint kind, bound).
  static BenchmarkSpec defaults_for(const std::string& function_name);

  void validate() const;
};

/// True if `name` is one of the built-in target functions.
bool is_known_function(const std::string& name);

/// Dimension a function requires, or 0 when any dimension is accepted.
int required_dim(const std::string& name);

/// Evaluate a named target function.
double target(const std::string& function_name, const Vector& x);

struct BenchmarkData {
  Dataset train;
  Vector train_clean;  // noise-free target values at train.X
  Matrix test_X;
  Vector test_truth;
};

/// Uniform training and test inputs over the domain; noisy training observations.
BenchmarkData make_dataset(const BenchmarkSpec& spec, Rng& rng);

/// y + N(0, (snr_percent / 100 * std(y))^2) noise, iid.
Vector add_noise(const Vector& y_clean, double snr_percent, Rng& rng);

/// sqrt(sum (pred - truth)^2 / sum truth^2).
double relative_error(const Vector& y_pred, const Vector& y_true);

}  // namespace qhmcgp
