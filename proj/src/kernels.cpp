#include "qhmcgp/kernels.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <string>

#include "qhmcgp/error.hpp"

namespace qhmcgp {

namespace {

void check_pair(const Vector& x, const Vector& x_prime) {
  if (x.size() != x_prime.size()) {
    throw InvalidArgument("kernel: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                          std::to_string(x_prime.size()) + ")");
  }
  if (!x.allFinite() || !x_prime.allFinite()) throw InvalidArgument("kernel: non-finite input");
}

void check_dim(const Vector& x, int i) {
  if (i < 0 || i >= x.size()) {
    throw InvalidArgument("kernel: derivative index " + std::to_string(i) + " out of range for d=" +
                          std::to_string(x.size()));
  }
}

void check_rows(const Matrix& X, const char* what) {
  if (X.rows() == 0 || X.cols() == 0) throw InvalidArgument(std::string(what) + ": empty input");
  if (!X.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite input");
}

}  // namespace

Hyperparams Hyperparams::from_linear(double sigma, double length, double noise) {
  Hyperparams h{std::log(sigma), std::log(length), std::log(noise)};
  h.validate();
  return h;
}

Hyperparams Hyperparams::from_vector(const Vector& v) {
  if (v.size() != 3) throw InvalidArgument("hyperparameter vector must have 3 entries");
  return {v[0], v[1], v[2]};
}

void Hyperparams::validate() const {
  const double s = sigma(), l = length(), n = noise();
  if (!(std::isfinite(s) && s > 0.0)) throw InvalidArgument("hyperparams: sigma must be finite and > 0");
  if (!(std::isfinite(l) && l > 0.0)) throw InvalidArgument("hyperparams: length must be finite and > 0");
  if (!(std::isfinite(n) && n >= 0.0) || std::isnan(log_noise)) {
    throw InvalidArgument("hyperparams: noise must be finite and >= 0");
  }
}

double se_kernel(const Vector& x, const Vector& x_prime, const Hyperparams& hyper, bool same_index) {
  check_pair(x, x_prime);
  const double l = hyper.length();
  const double s2 = hyper.sigma() * hyper.sigma();
  double k = s2 * std::exp(-(x - x_prime).squaredNorm() / (2.0 * l * l));
  if (same_index) k += hyper.noise() * hyper.noise();
  return k;
}

double se_kernel_dxp(const Vector& x, const Vector& x_prime, const Hyperparams& hyper, int i) {
  check_pair(x, x_prime);
  check_dim(x, i);
  const double l2 = hyper.length() * hyper.length();
  return se_kernel(x, x_prime, hyper) * (x[i] - x_prime[i]) / l2;
}

double se_kernel_dxdxp(const Vector& x, const Vector& x_prime, const Hyperparams& hyper, int i) {
  check_pair(x, x_prime);
  check_dim(x, i);
  const double l2 = hyper.length() * hyper.length();
  const double diff = x[i] - x_prime[i];
  return se_kernel(x, x_prime, hyper) * (1.0 / l2 - diff * diff / (l2 * l2));
}

Matrix squared_distances(const Matrix& X, const Matrix& X_prime) {
  if (X.cols() != X_prime.cols()) throw InvalidArgument("squared_distances: inconsistent dimension");
  Matrix D(X.rows(), X_prime.rows());
  for (Eigen::Index b = 0; b < X_prime.rows(); ++b) {
    for (Eigen::Index a = 0; a < X.rows(); ++a) {
      D(a, b) = (X.row(a) - X_prime.row(b)).squaredNorm();
    }
  }
  return D;
}

CovMatrix cov_matrix(const Matrix& X, const Hyperparams& hyper, bool include_noise) {
  check_rows(X, "cov_matrix");
  const double l = hyper.length();
  const double s2 = hyper.sigma() * hyper.sigma();
  const double inv2l2 = 1.0 / (2.0 * l * l);
  const Eigen::Index n = X.rows();
  CovMatrix out;
  out.entries.resize(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    out.entries(b, b) = s2;
    for (Eigen::Index a = b + 1; a < n; ++a) {
      const double k = s2 * std::exp(-(X.row(a) - X.row(b)).squaredNorm() * inv2l2);
      out.entries(a, b) = k;
      out.entries(b, a) = k;
    }
  }
  if (include_noise) out.entries.diagonal().array() += hyper.noise() * hyper.noise();
  return out;
}

CovMatrix cov_matrix(const Matrix& X, const Matrix& X_prime, const Hyperparams& hyper) {
  check_rows(X, "cov_matrix");
  check_rows(X_prime, "cov_matrix");
  const double l = hyper.length();
  const double s2 = hyper.sigma() * hyper.sigma();
  CovMatrix out;
  out.entries = (s2 * (-squared_distances(X, X_prime) / (2.0 * l * l)).array().exp()).matrix();
  return out;
}

Matrix cross_cov_dxp(const Matrix& X, const Matrix& X_prime, const Hyperparams& hyper, int dim) {
  check_rows(X, "cross_cov_dxp");
  check_rows(X_prime, "cross_cov_dxp");
  if (dim < 0 || dim >= X.cols()) throw InvalidArgument("cross_cov_dxp: dim out of range");
  const double l2 = hyper.length() * hyper.length();
  Matrix K = cov_matrix(X, X_prime, hyper).entries;
  for (Eigen::Index b = 0; b < X_prime.rows(); ++b) {
    for (Eigen::Index a = 0; a < X.rows(); ++a) {
      K(a, b) *= (X(a, dim) - X_prime(b, dim)) / l2;
    }
  }
  return K;
}

CholeskyResult cholesky_with_jitter(const Matrix& A) {
  if (A.rows() != A.cols() || A.rows() == 0) throw InvalidArgument("cholesky: matrix must be square and non-empty");
  if (!A.allFinite()) throw InvalidArgument("cholesky: non-finite matrix");

  const double scale = A.diagonal().mean();
  auto attempt = [&](double jitter, CholeskyResult& out) {
    Matrix shifted = A;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() != Eigen::Success) return false;
    out.lower = llt.matrixL();
    if (!out.lower.allFinite()) return false;
    out.jitter_applied = jitter;
    return true;
  };

  CholeskyResult result;
  if (attempt(0.0, result)) return result;
  for (double rung : kJitterLadder) {
    if (attempt(rung * scale, result)) return result;
  }
  throw IllConditioned("cholesky: kernel matrix is ill-conditioned even with jitter " +
                       std::to_string(kJitterLadder.back()) + " * mean(diag)");
}

}  // namespace qhmcgp
