#include "qhmcgp/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qhmcgp/error.hpp"
#include "qhmcgp/normal.hpp"

namespace qhmcgp {

double ConstraintSet::beta() const { return -normal_quantile(eta); }

void ConstraintSet::add_point(const Vector& x) {
  if (points.rows() == 0) points.resize(0, x.size());
  if (points.cols() != x.size()) throw InvalidArgument("constraint point has wrong dimension");
  points.conservativeResize(points.rows() + 1, Eigen::NoChange);
  points.row(points.rows() - 1) = x.transpose();
}

ConstraintSet ConstraintSet::without_points() const {
  ConstraintSet c = *this;
  c.points.resize(0, points.cols());
  return c;
}

void ConstraintSet::validate(Eigen::Index dim) const {
  if (!(eta > 0.0 && eta < 0.5)) throw InvalidArgument("constraints: eta must lie in (0, 0.5)");
  if (!(penalty_weight >= 0.0)) throw InvalidArgument("constraints: penalty_weight must be >= 0");
  if (points.rows() > 0 && points.cols() != dim) throw InvalidArgument("constraints: point dimension mismatch");
  if (kind == ConstraintKind::Monotone) {
    if (active_dims.empty()) throw InvalidArgument("constraints: monotone kind needs active dims");
    for (int k : active_dims) {
      if (k < 0 || k >= dim) throw InvalidArgument("constraints: active dim " + std::to_string(k) + " out of range");
    }
  }
}

MarginReport margin(const GpFit& fit, const ConstraintSet& cset) {
  const double beta = cset.beta();
  MarginReport report;
  if (cset.kind == ConstraintKind::ValueLowerBound) {
    report.margins.resize(cset.size());
    if (!cset.empty()) {
      const PosteriorSummary post = fit.posterior(cset.points);
      report.margins = (post.mean - beta * post.std).array() - cset.bound;
    }
  } else {
    const auto n_dims = static_cast<Eigen::Index>(cset.active_dims.size());
    report.margins.resize(cset.size() * n_dims);
    for (Eigen::Index k = 0; k < n_dims; ++k) {
      if (cset.empty()) break;
      const PosteriorSummary post = fit.derivative_posterior(cset.points, cset.active_dims[k]);
      for (Eigen::Index p = 0; p < cset.size(); ++p) {
        report.margins[p * n_dims + k] = post.mean[p] - beta * post.std[p] - cset.bound;
      }
    }
  }
  report.worst = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < report.margins.size(); ++i) {
    if (report.margins[i] < 0.0) report.violations.push_back(static_cast<int>(i));
    report.worst = std::min(report.worst, report.margins[i]);
  }
  return report;
}

MarginReport margin(const Hyperparams& hyper, const Dataset& data, const ConstraintSet& cset) {
  return margin(GpFit(hyper, data), cset);
}

double violation_probability(double y_star, double s, double b) {
  if (!(s > 0.0)) throw InvalidArgument("violation_probability: s must be > 0");
  return normal_cdf((b - y_star) / s);
}

double constraint_penalty(const GpFit& fit, const ConstraintSet& cset) {
  if (cset.empty() || cset.penalty_weight == 0.0) return 0.0;
  const MarginReport r = margin(fit, cset);
  double sum = 0.0;
  for (int i : r.violations) sum += r.margins[i] * r.margins[i];
  return cset.penalty_weight * sum;
}

double penalized_potential(const Hyperparams& hyper, const Dataset& data, const ConstraintSet& cset) {
  const GpFit fit(hyper, data);
  const double base = fit.nll() + hyperprior_neglog(hyper);
  if (cset.empty()) return base;
  if (cset.mode == ConstraintMode::Hard) {
    return margin(fit, cset).violations.empty() ? base : std::numeric_limits<double>::infinity();
  }
  return base + constraint_penalty(fit, cset);
}

Eigen::Vector3d penalized_gradient(const Hyperparams& hyper, const Dataset& data,
                                   const ConstraintSet& cset) {
  const GpFit fit(hyper, data);
  Eigen::Vector3d grad = fit.nll_gradient() + hyperprior_grad(hyper);
  if (cset.mode == ConstraintMode::Hard || cset.empty() || cset.penalty_weight == 0.0) return grad;
  if (constraint_penalty(fit, cset) == 0.0) return grad;

  const Vector theta = hyper.as_vector();
  for (int k = 0; k < 3; ++k) {
    Vector up = theta, down = theta;
    up[k] += kPenaltyFdStep;
    down[k] -= kPenaltyFdStep;
    const double p_up = constraint_penalty(GpFit(Hyperparams::from_vector(up), data), cset);
    const double p_down = constraint_penalty(GpFit(Hyperparams::from_vector(down), data), cset);
    grad[k] += (p_up - p_down) / (2.0 * kPenaltyFdStep);
  }
  return grad;
}

}  // namespace qhmcgp
