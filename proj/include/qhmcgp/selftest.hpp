#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "qhmcgp/constraints.hpp"
#include "qhmcgp/rng.hpp"

namespace qhmcgp {

/// Random (hyperparameters, data) pair for gradient checks: N points uniform
/// in [0,1]^d with a smooth noisy response.
struct GradientInstance {
  Hyperparams hyper;
  Dataset data;
};

GradientInstance random_gradient_instance(Rng& rng, int n, int dim);

/// Soft value constraint at one random point whose bound is set so the margin
/// at `hyper` equals -depth.
ConstraintSet violated_constraint(const GradientInstance& inst, Rng& rng, double depth);

/// Central finite-difference gradient of f in every coordinate.
Vector central_difference(const std::function<double(const Vector&)>& f, const Vector& x, double step);

/// max |a - b| / max |b|.
double max_relative_error(const Vector& a, const Vector& b);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestOptions {
  /// Replaces nll_grad inside the gradient check; lets tests inject a bug.
  std::function<Eigen::Vector3d(const Hyperparams&, const Dataset&)> gradient_override;
  std::uint64_t seed = 20240611;
};

/// Sampler moment test, gradient finite-difference checks, leapfrog
/// reversibility and kernel-derivative consistency.
std::vector<CheckResult> run_selftest(const SelftestOptions& options = {});

}  // namespace qhmcgp
