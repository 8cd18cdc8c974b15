#pragma once

#include <vector>

#include "qhmcgp/gp_model.hpp"

namespace qhmcgp {

enum class ConstraintKind { ValueLowerBound, Monotone };
enum class ConstraintMode { Hard, Soft };

/// Locations where the posterior is required to satisfy a bound with
/// probability at least 1 - eta.
///
/// ValueLowerBound asks f(x) >= bound; Monotone asks df/dx_i >= 0 for every i
/// in active_dims. Hard mode rejects violating hyperparameters outright,
/// soft mode charges a quadratic hinge penalty weighted by penalty_weight.
struct ConstraintSet {
  Matrix points;  // m x d, m may be zero
  ConstraintKind kind = ConstraintKind::ValueLowerBound;
  double bound = 0.0;
  std::vector<int> active_dims;
  ConstraintMode mode = ConstraintMode::Hard;
  double eta = 0.022;
  double penalty_weight = 100.0;

  Eigen::Index size() const { return points.rows(); }
  bool empty() const { return points.rows() == 0; }

  /// Margin coefficient -Phi^{-1}(eta).
  double beta() const;

  void add_point(const Vector& x);

  /// Same settings, no points.
  ConstraintSet without_points() const;

  void validate(Eigen::Index dim) const;
};

/// Constraint margins y* - beta s - bound (value) or d* - beta s_d (monotone).
///
/// Monotone margins are ordered point-major: entry p * n_dims + k belongs to
/// point p and active_dims[k].
struct MarginReport {
  Vector margins;
  std::vector<int> violations;
  double worst = 0.0;  // +inf when there are no margins
};

MarginReport margin(const GpFit& fit, const ConstraintSet& cset);
MarginReport margin(const Hyperparams& hyper, const Dataset& data, const ConstraintSet& cset);

/// Posterior probability that the latent value lies below b.
double violation_probability(double y_star, double s, double b);

/// lambda * sum of squared negative margins.
double constraint_penalty(const GpFit& fit, const ConstraintSet& cset);

/// potential() plus the constraint term: a hinge penalty (soft) or +inf on any violation (hard).
double penalized_potential(const Hyperparams& hyper, const Dataset& data, const ConstraintSet& cset);

/// Step used to differentiate the penalty by central differences.
inline constexpr double kPenaltyFdStep = 1e-5;

/// Force for the sampler. Hard mode returns nll_grad; soft mode adds the
/// penalty gradient by central differences when any margin is violated.
Eigen::Vector3d penalized_gradient(const Hyperparams& hyper, const Dataset& data,
                                   const ConstraintSet& cset);

}  // namespace qhmcgp
