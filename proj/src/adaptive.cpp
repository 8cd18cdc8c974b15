#include "qhmcgp/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qhmcgp/bench.hpp"
#include "qhmcgp/error.hpp"

namespace qhmcgp {

namespace {

constexpr std::size_t kChainAverageSamples = 20;
constexpr double kFeasibilityWeights[] = {1e2, 1e3, 1e4, 1e5};
constexpr int kFeasibilityIters = 100;
constexpr double kFeasibilityMaxMove = 0.5;
constexpr double kTruthSlopeStep = 1e-6;

double true_margin(const TruthFn& truth, const ConstraintSet& cset, const Vector& x) {
  if (!truth) return std::numeric_limits<double>::quiet_NaN();
  if (cset.kind == ConstraintKind::ValueLowerBound) return truth(x) - cset.bound;
  double worst = std::numeric_limits<double>::infinity();
  for (int k : cset.active_dims) {
    Vector up = x, down = x;
    up[k] += kTruthSlopeStep;
    down[k] -= kTruthSlopeStep;
    worst = std::min(worst, (truth(up) - truth(down)) / (2.0 * kTruthSlopeStep) - cset.bound);
  }
  return worst;
}

std::optional<Eigen::Index> argmax_free(const Vector& score, const std::vector<bool>& taken) {
  std::optional<Eigen::Index> best;
  for (Eigen::Index i = 0; i < score.size(); ++i) {
    if (taken[i]) continue;
    if (!best || score[i] > score[*best]) best = i;
  }
  return best;
}

// A hard-constraint chain cannot leave an infeasible start: every proposal
// that is still infeasible is rejected. Descend the soft-penalized potential
// under a rising penalty weight until the hard potential becomes finite.
std::optional<Vector> find_feasible_start(const Dataset& data, const ConstraintSet& cset, const Vector& init) {
  ConstraintSet relaxed = cset;
  relaxed.mode = ConstraintMode::Soft;
  const auto feasible = [&](const Vector& th) {
    return std::isfinite(penalized_potential(Hyperparams::from_vector(th), data, cset));
  };
  Vector x = init;
  for (double weight : kFeasibilityWeights) {
    relaxed.penalty_weight = std::max(cset.penalty_weight, weight);
    const auto U = [&](const Vector& th) {
      try {
        return penalized_potential(Hyperparams::from_vector(th), data, relaxed);
      } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    double fx = U(x);
    for (int iter = 0; iter < kFeasibilityIters && std::isfinite(fx); ++iter) {
      const Vector g = penalized_gradient(Hyperparams::from_vector(x), data, relaxed);
      const double gmax = g.cwiseAbs().maxCoeff();
      if (!(gmax > 0.0) || !std::isfinite(gmax)) break;
      double t = kFeasibilityMaxMove / gmax;
      bool moved = false;
      for (int halving = 0; halving < 30; ++halving, t *= 0.5) {
        const Vector trial = x - t * g;
        const double ft = U(trial);
        if (ft < fx) {
          x = trial;
          fx = ft;
          moved = true;
          break;
        }
      }
      if (feasible(x)) return x;
      if (!moved) break;
    }
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::ConstraintAdaptive: return "constraint_adaptive";
    case Strategy::VarianceAdaptive: return "variance_adaptive";
    case Strategy::Combined: return "combined";
  }
  return "combined";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "constraint_adaptive") return Strategy::ConstraintAdaptive;
  if (name == "variance_adaptive") return Strategy::VarianceAdaptive;
  if (name == "combined") return Strategy::Combined;
  throw InvalidArgument("unknown strategy '" + name + "'");
}

void AdaptiveConfig::validate() const {
  if (candidate_grid.rows() == 0) throw InvalidArgument("adaptive: candidate grid is empty");
  if (max_constraints < 0 || max_constraints > candidate_grid.rows()) {
    throw InvalidArgument("adaptive: max_constraints must lie in [0, grid size]");
  }
  if (!(variance_threshold > 0.0)) throw InvalidArgument("adaptive: variance_threshold must be > 0");
  if (initial_constraints.rows() > 0 && initial_constraints.cols() != candidate_grid.cols()) {
    throw InvalidArgument("adaptive: initial constraints have the wrong dimension");
  }
}

Matrix latin_hypercube(int n, int dim, double lower, double upper, Rng& rng) {
  if (n < 1 || dim < 1) throw InvalidArgument("latin_hypercube: need n >= 1 and dim >= 1");
  Matrix X(n, dim);
  std::vector<int> perm(n);
  for (int j = 0; j < dim; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);
    for (int i = 0; i < n; ++i) {
      X(i, j) = lower + (upper - lower) * (perm[i] + rng.uniform()) / n;
    }
  }
  return X;
}

Vector candidate_variances(const GpFit& fit, const Matrix& candidate_grid) {
  return fit.posterior(candidate_grid).variance();
}

Vector candidate_margins(const GpFit& fit, const ConstraintSet& cset, const Matrix& candidate_grid) {
  ConstraintSet probe = cset.without_points();
  probe.points = candidate_grid;
  const MarginReport r = margin(fit, probe);
  if (cset.kind == ConstraintKind::ValueLowerBound) return r.margins;
  const auto n_dims = static_cast<Eigen::Index>(cset.active_dims.size());
  Vector worst(candidate_grid.rows());
  for (Eigen::Index p = 0; p < candidate_grid.rows(); ++p) {
    worst[p] = r.margins.segment(p * n_dims, n_dims).minCoeff();
  }
  return worst;
}

Selection select_point(Strategy strategy, const GpFit& fit, const ConstraintSet& cset,
                       const Matrix& candidate_grid, const std::vector<bool>& taken,
                       double variance_threshold) {
  if (candidate_grid.rows() == 0) throw InvalidArgument("select_point: empty candidate grid");
  if (static_cast<Eigen::Index>(taken.size()) != candidate_grid.rows()) {
    throw InvalidArgument("select_point: taken mask does not match grid");
  }

  Selection sel;
  bool use_variance = strategy == Strategy::VarianceAdaptive;
  Vector variances;
  if (strategy != Strategy::ConstraintAdaptive) {
    variances = candidate_variances(fit, candidate_grid);
    if (strategy == Strategy::Combined) {
      const auto best = argmax_free(variances, taken);
      use_variance = best && variances[*best] > variance_threshold;
    }
  }

  if (use_variance) {
    sel.index = argmax_free(variances, taken);
    sel.by_variance = true;
    if (sel.index) sel.score = variances[*sel.index];
    return sel;
  }

  const Vector margins = candidate_margins(fit, cset, candidate_grid);
  const auto worst = argmax_free(-margins, taken);
  if (worst && margins[*worst] < 0.0) {
    sel.index = worst;
    sel.score = margins[*worst];
  }
  return sel;
}

Hyperparams initial_hyperparams(const Dataset& data) {
  const double sd = std::sqrt(data.y.array().square().mean());
  const double signal = sd > 0.0 ? sd : 1.0;
  std::vector<double> dists;
  const Eigen::Index n = data.size();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) dists.push_back((data.X.row(a) - data.X.row(b)).norm());
  }
  double length = 1.0;
  if (!dists.empty()) {
    std::nth_element(dists.begin(), dists.begin() + dists.size() / 2, dists.end());
    length = dists[dists.size() / 2];
  }
  return {std::log(signal), std::log(length), std::log(0.1 * signal)};
}

AdaptiveResult adaptive_train(const Dataset& data, const QhmcConfig& qhmc, const ConstraintSet& cset_template,
                              const AdaptiveConfig& adaptive, const TestSet& test_set, const TruthFn& truth) {
  qhmc.validate();
  adaptive.validate();
  cset_template.validate(data.dim());
  if (adaptive.candidate_grid.cols() != data.dim()) throw InvalidArgument("adaptive: grid dimension mismatch");
  if (test_set.X.rows() == 0 || test_set.X.rows() != test_set.truth.size()) {
    throw InvalidArgument("adaptive: test set is empty or inconsistent");
  }

  AdaptiveResult result;
  result.constraints = cset_template.without_points();
  for (Eigen::Index i = 0; i < adaptive.initial_constraints.rows(); ++i) {
    result.constraints.add_point(adaptive.initial_constraints.row(i).transpose());
  }
  std::vector<bool> taken(adaptive.candidate_grid.rows(), false);
  const Rng step_streams(qhmc.seed);

  Hyperparams working = initial_hyperparams(data);
  Vector added;
  double added_score = 0.0;
  double added_truth = std::numeric_limits<double>::quiet_NaN();

  for (int step = 0;; ++step) {
    const ConstraintSet& cset = result.constraints;
    QhmcConfig cfg = qhmc;
    cfg.seed = step_streams.split(static_cast<std::uint64_t>(step)).seed();

    const auto U = [&](const Vector& th) { return penalized_potential(Hyperparams::from_vector(th), data, cset); };
    const auto G = [&](const Vector& th) -> Vector {
      return penalized_gradient(Hyperparams::from_vector(th), data, cset);
    };
    Vector start = working.as_vector();
    if (cset.mode == ConstraintMode::Hard && !cset.empty() && !std::isfinite(U(start))) {
      if (auto feasible = find_feasible_start(data, cset, start)) start = *feasible;
    }
    SampleChain chain;
    try {
      chain = run_chain(U, G, start, cfg);
    } catch (const Error& e) {
      throw ChainFailure("adaptive step " + std::to_string(step) + " (" + std::to_string(cset.size()) +
                         " constraints): " + e.what());
    }
    working = Hyperparams::from_vector(chain.samples[chain.argmin_potential()]);

    const GpFit fit(working, data);
    const PosteriorSummary post = fit.posterior(test_set.X);

    // Chain-averaged prediction from evenly thinned finite-potential samples.
    Vector avg = Vector::Zero(test_set.X.rows());
    int used = 0;
    const std::size_t stride = std::max<std::size_t>(1, chain.samples.size() / kChainAverageSamples);
    const std::size_t n_chain = chain.samples.size();
    for (std::size_t k = 0; k < kChainAverageSamples && k * stride < n_chain; ++k) {
      const std::size_t i = n_chain - 1 - k * stride;
      if (!std::isfinite(chain.potentials[i])) continue;
      try {
        avg += GpFit(Hyperparams::from_vector(chain.samples[i]), data).posterior(test_set.X).mean;
        ++used;
      } catch (const Error&) {
      }
    }

    TraceRecord rec;
    rec.step = step;
    rec.n_constraints = static_cast<int>(cset.size());
    rec.rel_error = relative_error(post.mean, test_set.truth);
    rec.rel_error_chain_mean = used > 0 ? relative_error(avg / used, test_set.truth) : rec.rel_error;
    rec.mean_post_var = post.variance().mean();
    rec.acceptance_rate = chain.acceptance_rate;
    rec.hyper = working;
    rec.added_location = added;
    rec.selection_score = added_score;
    rec.true_margin = added_truth;
    result.trace.push_back(rec);
    result.acceptance_rate = chain.acceptance_rate;

    if (cset.size() >= adaptive.max_constraints) break;
    const Selection sel = select_point(adaptive.strategy, fit, cset, adaptive.candidate_grid, taken,
                                       adaptive.variance_threshold);
    if (!sel.index) break;
    taken[*sel.index] = true;
    added = adaptive.candidate_grid.row(*sel.index).transpose();
    added_score = sel.score;
    added_truth = true_margin(truth, cset, added);
    result.constraints.add_point(added);
  }
  result.hyper = working;
  return result;
}

}  // namespace qhmcgp
