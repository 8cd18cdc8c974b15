#pragma once

#include <Eigen/Core>

#include "qhmcgp/kernels.hpp"

namespace qhmcgp {

/// Training inputs and (centered) observations.
///
/// Rows of X are pairwise distinct. When centering is on, y_mean holds the
/// training mean and y stores the residuals; predictions add y_mean back.
struct Dataset {
  Matrix X;
  Vector y;
  double y_mean = 0.0;

  static Dataset make(Matrix X, const Vector& y, bool center = true);

  Eigen::Index size() const { return X.rows(); }
  Eigen::Index dim() const { return X.cols(); }
};

/// Predictive mean and standard deviation at a set of query points.
struct PosteriorSummary {
  Vector mean;
  Vector std;
  Matrix query_points;

  Vector variance() const { return std.array().square().matrix(); }
};

/// Standard deviation of the independent normal hyperprior on each log-hyperparameter.
inline constexpr double kHyperpriorStd = 2.0;

/// Negative log hyperprior, up to its additive constant.
double hyperprior_neglog(const Hyperparams& hyper);
Eigen::Vector3d hyperprior_grad(const Hyperparams& hyper);

/// A GP conditioned on data at fixed hyperparameters.
///
/// Holds the Cholesky factor of the noisy training covariance and the
/// weight vector alpha = K^{-1} y. Immutable once built, so it can be shared
/// across threads. The dataset must outlive the fit.
class GpFit {
 public:
  GpFit(const Hyperparams& hyper, const Dataset& data);

  const Hyperparams& hyper() const { return hyper_; }
  const Dataset& data() const { return *data_; }
  double jitter() const { return jitter_; }
  const Matrix& cholesky_lower() const { return lower_; }
  const Vector& alpha() const { return alpha_; }

  /// Negative log marginal likelihood.
  double nll() const;

  /// Gradient of nll() with respect to (log sigma, log length, log noise).
  Eigen::Vector3d nll_gradient() const;

  PosteriorSummary posterior(const Matrix& X_query) const;

  /// Posterior of df/dx_dim. No prior-mean offset: the constant mean has zero slope.
  PosteriorSummary derivative_posterior(const Matrix& X_query, int dim) const;

 private:
  Hyperparams hyper_;
  const Dataset* data_;
  Matrix lower_;
  Vector alpha_;
  double jitter_ = 0.0;
};

double nll(const Hyperparams& hyper, const Dataset& data);

/// Unconstrained sampling potential: nll plus the negative log hyperprior.
double potential(const Hyperparams& hyper, const Dataset& data);

/// Gradient of potential() in log-hyperparameter space.
Eigen::Vector3d nll_grad(const Hyperparams& hyper, const Dataset& data);

PosteriorSummary posterior(const Hyperparams& hyper, const Dataset& data, const Matrix& X_query);

PosteriorSummary derivative_posterior(const Hyperparams& hyper, const Dataset& data,
                                      const Matrix& X_query, int dim);

}  // namespace qhmcgp
