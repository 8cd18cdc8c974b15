#include "qhmcgp/experiment.hpp"

#include <chrono>
#include <numeric>

#include "qhmcgp/error.hpp"

namespace qhmcgp {

namespace {

enum Stream : std::uint64_t { kData = 10, kGrid = 11, kChain = 12 };

struct Preset {
  const char* suffix;
  ConstraintMode mode;
  Strategy strategy;
};

constexpr Preset kPresets[] = {
    {"ad", ConstraintMode::Hard, Strategy::ConstraintAdaptive},
    {"soft-ad", ConstraintMode::Soft, Strategy::ConstraintAdaptive},
    {"var", ConstraintMode::Hard, Strategy::VarianceAdaptive},
    {"soft-var", ConstraintMode::Soft, Strategy::VarianceAdaptive},
    {"both", ConstraintMode::Hard, Strategy::Combined},
    {"soft-both", ConstraintMode::Soft, Strategy::Combined},
};

}  // namespace

std::vector<std::string> known_methods() {
  std::vector<std::string> out{"unconstrained", "custom"};
  for (const char* family : {"QHMC-", "HMC-"}) {
    for (const Preset& p : kPresets) out.push_back(std::string(family) + p.suffix);
  }
  return out;
}

ExperimentSettings apply_method(ExperimentSettings s) {
  if (s.method == "custom") return s;
  if (s.method == "unconstrained") {
    s.max_constraints = 0;
    return s;
  }
  for (const char* family : {"QHMC-", "HMC-"}) {
    for (const Preset& p : kPresets) {
      if (s.method == std::string(family) + p.suffix) {
        s.mode = p.mode;
        s.strategy = p.strategy;
        if (std::string(family) == "HMC-") s.qhmc.sigma_m = 0.0;
        return s;
      }
    }
  }
  throw InvalidArgument("unknown method '" + s.method + "'");
}

void ExperimentSettings::validate() const {
  bench.validate();
  qhmc.validate();
  apply_method(*this);
  if (n_candidates < 1) throw InvalidArgument("n_candidates must be >= 1");
  if (max_constraints < 0 || max_constraints > n_candidates) {
    throw InvalidArgument("max_constraints must lie in [0, n_candidates]");
  }
  if (!(variance_threshold > 0.0)) throw InvalidArgument("variance_threshold must be > 0");
  if (!(eta > 0.0 && eta < 0.5)) throw InvalidArgument("eta must lie in (0, 0.5)");
  if (!(penalty_weight >= 0.0)) throw InvalidArgument("penalty_weight must be >= 0");
  for (int k : active_dims) {
    if (k < 0 || k >= bench.dim) throw InvalidArgument("active dim " + std::to_string(k) + " out of range");
  }
}

BenchmarkData experiment_data(const ExperimentSettings& settings) {
  Rng data_rng = Rng(settings.bench.seed).split(kData);
  return make_dataset(settings.bench, data_rng);
}

ExperimentReport run_experiment(const ExperimentSettings& raw) {
  raw.validate();
  const ExperimentSettings s = apply_method(raw);
  const auto started = std::chrono::steady_clock::now();

  const Rng root(s.bench.seed);
  const BenchmarkData data = experiment_data(s);
  Rng grid_rng = root.split(kGrid);

  AdaptiveConfig adaptive;
  adaptive.strategy = s.strategy;
  adaptive.max_constraints = s.max_constraints;
  adaptive.variance_threshold = s.variance_threshold;
  adaptive.candidate_grid = latin_hypercube(s.n_candidates, s.bench.dim, s.bench.lower, s.bench.upper, grid_rng);
  adaptive.initial_constraints = s.initial_constraints;

  ConstraintSet cset;
  cset.kind = s.bench.constraint_kind;
  cset.bound = s.bench.bound;
  cset.mode = s.mode;
  cset.eta = s.eta;
  cset.penalty_weight = s.penalty_weight;
  if (cset.kind == ConstraintKind::Monotone) {
    cset.active_dims = s.active_dims;
    if (cset.active_dims.empty()) {
      cset.active_dims.resize(s.bench.dim);
      std::iota(cset.active_dims.begin(), cset.active_dims.end(), 0);
    }
  }

  QhmcConfig qhmc = s.qhmc;
  qhmc.seed = root.split(kChain).seed();

  const std::string fn = s.bench.function_name;
  AdaptiveResult trained = adaptive_train(data.train, qhmc, cset, adaptive, {data.test_X, data.test_truth},
                                          [&fn](const Vector& x) { return target(fn, x); });

  ExperimentReport report;
  report.experiment_id = s.experiment_id;
  report.method = s.method;
  report.spec = s.bench;
  const TraceRecord& last = trained.trace.back();
  report.rel_error = last.rel_error;
  report.rel_error_chain_mean = last.rel_error_chain_mean;
  report.mean_posterior_variance = last.mean_post_var;
  report.acceptance_rate = trained.acceptance_rate;
  report.n_constraints_final = static_cast<int>(trained.constraints.size());
  report.hyper = trained.hyper;
  report.constraints = std::move(trained.constraints);
  report.trace = std::move(trained.trace);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  report.wall_time_s = std::max(elapsed.count(), 1e-9);
  return report;
}

}  // namespace qhmcgp
