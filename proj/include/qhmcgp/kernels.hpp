#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>

namespace qhmcgp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Squared-exponential hyperparameters, stored in log space.
///
/// sigma is the signal standard deviation, length the isotropic length-scale,
/// noise the observation noise standard deviation. A noise of exactly zero is
/// allowed (log_noise = -inf) for interpolation tests.
struct Hyperparams {
  double log_sigma = 0.0;
  double log_length = 0.0;
  double log_noise = 0.0;

  static Hyperparams from_linear(double sigma, double length, double noise);
  static Hyperparams from_array(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

  double sigma() const { return std::exp(log_sigma); }
  double length() const { return std::exp(log_length); }
  double noise() const { return std::exp(log_noise); }

  std::array<double, 3> as_array() const { return {log_sigma, log_length, log_noise}; }
  Vector as_vector() const { return Eigen::Vector3d(log_sigma, log_length, log_noise); }
  static Hyperparams from_vector(const Vector& v);

  /// Throws InvalidArgument unless sigma, length are finite and > 0 and noise >= 0.
  void validate() const;
};

/// Dense covariance matrix plus the diagonal jitter that was needed to factor it.
struct CovMatrix {
  Matrix entries;
  double jitter_applied = 0.0;
};

/// Lower Cholesky factor of A + jitter * I.
struct CholeskyResult {
  Matrix lower;
  double jitter_applied = 0.0;
};

/// sigma^2 exp(-|x - x'|^2 / 2 l^2), plus noise^2 when `same_index` is set.
///
/// The noise term is a Kronecker delta on sample identity: the caller sets
/// `same_index` only for the diagonal of a training covariance, never on
/// value equality of two different points.
double se_kernel(const Vector& x, const Vector& x_prime, const Hyperparams& hyper,
                 bool same_index = false);

/// d/dx'_i of the noise-free kernel: covariance between f(x) and df(x')/dx'_i.
double se_kernel_dxp(const Vector& x, const Vector& x_prime, const Hyperparams& hyper, int i);

/// d^2/(dx_i dx'_i) of the noise-free kernel: covariance of two partial derivatives.
double se_kernel_dxdxp(const Vector& x, const Vector& x_prime, const Hyperparams& hyper, int i);

/// Training covariance K(X, X); noise on the diagonal iff include_noise.
CovMatrix cov_matrix(const Matrix& X, const Hyperparams& hyper, bool include_noise);

/// Noise-free cross covariance K(X, X') with rows of X indexing the result rows.
CovMatrix cov_matrix(const Matrix& X, const Matrix& X_prime, const Hyperparams& hyper);

/// Cross covariance between f at rows of X and df/dx_dim at rows of X_prime.
Matrix cross_cov_dxp(const Matrix& X, const Matrix& X_prime, const Hyperparams& hyper, int dim);

/// Pairwise squared Euclidean distances between rows.
Matrix squared_distances(const Matrix& X, const Matrix& X_prime);

/// Jitter multipliers tried in order after a plain factorization fails.
inline constexpr std::array<double, 4> kJitterLadder = {1e-10, 1e-8, 1e-6, 1e-4};

/// Cholesky of a symmetric matrix, escalating diagonal jitter through
/// kJitterLadder * mean(diag(A)). Throws IllConditioned when the last rung fails.
CholeskyResult cholesky_with_jitter(const Matrix& A);

}  // namespace qhmcgp
