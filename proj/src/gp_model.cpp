#include "qhmcgp/gp_model.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>
#include <string>

#include "qhmcgp/error.hpp"

namespace qhmcgp {

Dataset Dataset::make(Matrix X, const Vector& y, bool center) {
  if (X.rows() < 1 || X.cols() < 1) throw InvalidArgument("dataset: need at least one point");
  if (X.rows() != y.size()) throw InvalidArgument("dataset: X and y have different lengths");
  if (!X.allFinite() || !y.allFinite()) throw InvalidArgument("dataset: non-finite entries");
  for (Eigen::Index a = 0; a < X.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < X.rows(); ++b) {
      if (X.row(a) == X.row(b)) {
        throw InvalidArgument("dataset: duplicate input rows " + std::to_string(a) + " and " +
                              std::to_string(b));
      }
    }
  }
  Dataset d;
  d.X = std::move(X);
  d.y_mean = center ? y.mean() : 0.0;
  d.y = y.array() - d.y_mean;
  return d;
}

double hyperprior_neglog(const Hyperparams& hyper) {
  const double v = kHyperpriorStd * kHyperpriorStd;
  const double ln = std::isfinite(hyper.log_noise) ? hyper.log_noise : 0.0;
  return (hyper.log_sigma * hyper.log_sigma + hyper.log_length * hyper.log_length + ln * ln) / (2.0 * v);
}

Eigen::Vector3d hyperprior_grad(const Hyperparams& hyper) {
  const double v = kHyperpriorStd * kHyperpriorStd;
  const double ln = std::isfinite(hyper.log_noise) ? hyper.log_noise : 0.0;
  return Eigen::Vector3d(hyper.log_sigma, hyper.log_length, ln) / v;
}

GpFit::GpFit(const Hyperparams& hyper, const Dataset& data) : hyper_(hyper), data_(&data) {
  hyper.validate();
  CovMatrix K = cov_matrix(data.X, hyper, true);
  CholeskyResult chol = cholesky_with_jitter(K.entries);
  lower_ = std::move(chol.lower);
  jitter_ = chol.jitter_applied;
  alpha_ = lower_.triangularView<Eigen::Lower>().solve(data.y);
  lower_.transpose().triangularView<Eigen::Upper>().solveInPlace(alpha_);
}

double GpFit::nll() const {
  const double n = static_cast<double>(data_->size());
  const double quad = data_->y.dot(alpha_);
  const double logdet = 2.0 * lower_.diagonal().array().log().sum();
  return 0.5 * (quad + logdet + n * std::log(2.0 * std::numbers::pi));
}

Eigen::Vector3d GpFit::nll_gradient() const {
  const Eigen::Index n = data_->size();
  const Matrix Linv = lower_.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
  // W = K^{-1} - alpha alpha^T; each component is 0.5 * sum(W .* dK/dtheta).
  // Only the lower triangle of W is filled and read.
  Matrix W = Matrix::Zero(n, n);
  W.selfadjointView<Eigen::Lower>().rankUpdate(Linv.transpose());
  W.selfadjointView<Eigen::Lower>().rankUpdate(alpha_, -1.0);

  const double l2 = hyper_.length() * hyper_.length();
  const double s2 = hyper_.sigma() * hyper_.sigma();
  const double inv2l2 = 1.0 / (2.0 * l2);
  const Matrix& X = data_->X;

  double g_sigma = 0.0;
  double g_length = 0.0;
  for (Eigen::Index b = 0; b < n; ++b) {
    g_sigma += W(b, b) * s2;
    for (Eigen::Index a = b + 1; a < n; ++a) {
      const double r2 = (X.row(a) - X.row(b)).squaredNorm();
      const double kf = s2 * std::exp(-r2 * inv2l2);
      g_sigma += 2.0 * W(a, b) * kf;
      g_length += 2.0 * W(a, b) * kf * r2 / l2;
    }
  }
  // dK/dlog(sigma) = 2 K_f; dK/dlog(l) = K_f .* r^2 / l^2; dK/dlog(noise) = 2 noise^2 I.
  const double noise2 = hyper_.noise() * hyper_.noise();
  return Eigen::Vector3d(g_sigma, 0.5 * g_length, noise2 * W.trace());
}

PosteriorSummary GpFit::posterior(const Matrix& X_query) const {
  if (X_query.cols() != data_->dim()) throw InvalidArgument("posterior: query dimension mismatch");
  PosteriorSummary out;
  out.query_points = X_query;
  if (X_query.rows() == 0) return out;
  const Matrix Ks = cov_matrix(data_->X, X_query, hyper_).entries;
  out.mean = (Ks.transpose() * alpha_).array() + data_->y_mean;
  const Matrix V = lower_.triangularView<Eigen::Lower>().solve(Ks);
  const double s2 = hyper_.sigma() * hyper_.sigma();
  out.std = (s2 - V.colwise().squaredNorm().transpose().array()).max(0.0).sqrt();
  return out;
}

PosteriorSummary GpFit::derivative_posterior(const Matrix& X_query, int dim) const {
  if (X_query.cols() != data_->dim()) throw InvalidArgument("derivative_posterior: query dimension mismatch");
  if (dim < 0 || dim >= data_->dim()) throw InvalidArgument("derivative_posterior: dim out of range");
  PosteriorSummary out;
  out.query_points = X_query;
  if (X_query.rows() == 0) return out;
  const Matrix Kd = cross_cov_dxp(data_->X, X_query, hyper_, dim);
  out.mean = Kd.transpose() * alpha_;
  const Matrix V = lower_.triangularView<Eigen::Lower>().solve(Kd);
  const double prior = hyper_.sigma() * hyper_.sigma() / (hyper_.length() * hyper_.length());
  out.std = (prior - V.colwise().squaredNorm().transpose().array()).max(0.0).sqrt();
  return out;
}

double nll(const Hyperparams& hyper, const Dataset& data) { return GpFit(hyper, data).nll(); }

double potential(const Hyperparams& hyper, const Dataset& data) {
  return nll(hyper, data) + hyperprior_neglog(hyper);
}

Eigen::Vector3d nll_grad(const Hyperparams& hyper, const Dataset& data) {
  return GpFit(hyper, data).nll_gradient() + hyperprior_grad(hyper);
}

PosteriorSummary posterior(const Hyperparams& hyper, const Dataset& data, const Matrix& X_query) {
  return GpFit(hyper, data).posterior(X_query);
}

PosteriorSummary derivative_posterior(const Hyperparams& hyper, const Dataset& data,
                                      const Matrix& X_query, int dim) {
  return GpFit(hyper, data).derivative_posterior(X_query, dim);
}

}  // namespace qhmcgp
