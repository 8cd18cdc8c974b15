#include "qhmcgp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "qhmcgp/error.hpp"

namespace qhmcgp {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config field '" + path + "': " + what);
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(join(path, key), "must be finite");
  return d;
}

long long get_integer(const json& obj, const std::string& path, const char* key, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  return v.get<long long>();
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback, int min_value) {
  const long long v = get_integer(obj, path, key, fallback);
  if (v < min_value) fail(join(path, key), "must be >= " + std::to_string(min_value) + " (got " + std::to_string(v) + ")");
  if (v > std::numeric_limits<int>::max()) fail(join(path, key), "too large");
  return static_cast<int>(v);
}

std::string get_string(const json& obj, const std::string& path, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(join(path, key), "expected a string");
  return v.get<std::string>();
}

const json& section(const json& root, const char* key) {
  static const json empty = json::object();
  return root.contains(key) ? root.at(key) : empty;
}

Matrix get_points(const json& obj, const std::string& path, const char* key, int dim) {
  if (!obj.contains(key)) return Matrix(0, dim);
  const json& v = obj.at(key);
  if (!v.is_array()) fail(join(path, key), "expected an array of points");
  Matrix out(static_cast<Eigen::Index>(v.size()), dim);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& row = v[i];
    const std::string rp = join(path, key) + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != static_cast<std::size_t>(dim)) {
      fail(rp, "expected an array of " + std::to_string(dim) + " numbers");
    }
    for (int j = 0; j < dim; ++j) {
      if (!row[j].is_number()) fail(rp, "expected numbers");
      out(static_cast<Eigen::Index>(i), j) = row[j].get<double>();
    }
  }
  return out;
}

}  // namespace

std::string to_string(ConstraintKind k) {
  return k == ConstraintKind::Monotone ? "monotone" : "value_lower_bound";
}

std::string to_string(ConstraintMode m) { return m == ConstraintMode::Soft ? "soft" : "hard"; }

RunConfig parse_config(const std::string& text) {
  json root;
  if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
    root = json::object();
  } else {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config syntax error: ") + e.what());
    }
  }
  reject_unknown(root, "", {"experiment_id", "method", "seed", "output_dir", "benchmark", "qhmc", "constraints",
                            "adaptive", "sweep"});

  RunConfig cfg;
  ExperimentSettings& s = cfg.settings;

  const json& b = section(root, "benchmark");
  reject_unknown(b, "benchmark", {"function", "dim", "lower", "upper", "n_train", "n_test", "snr_percent"});
  const std::string fn = get_string(b, "benchmark", "function", "arctan2d");
  if (!is_known_function(fn)) fail("benchmark.function", "unknown function '" + fn + "'");
  s.bench = BenchmarkSpec::defaults_for(fn);
  s.bench.dim = get_int(b, "benchmark", "dim", s.bench.dim, 1);
  if (required_dim(fn) != 0 && s.bench.dim != required_dim(fn)) {
    fail("benchmark.dim", fn + " requires dim " + std::to_string(required_dim(fn)));
  }
  s.bench.lower = get_number(b, "benchmark", "lower", s.bench.lower);
  s.bench.upper = get_number(b, "benchmark", "upper", s.bench.upper);
  if (!(s.bench.upper > s.bench.lower)) fail("benchmark.upper", "must exceed benchmark.lower");
  s.bench.n_train = get_int(b, "benchmark", "n_train", s.bench.n_train, 1);
  s.bench.n_test = get_int(b, "benchmark", "n_test", s.bench.n_test, 1);
  s.bench.snr_percent = get_number(b, "benchmark", "snr_percent", s.bench.snr_percent);
  if (s.bench.snr_percent < 0.0) fail("benchmark.snr_percent", "must be >= 0");

  if (root.contains("seed")) {
    const json& v = root.at("seed");
    if (v.is_number_unsigned()) {
      s.bench.seed = v.get<std::uint64_t>();
    } else if (v.is_number_integer()) {
      fail("seed", "must be >= 0");
    } else {
      fail("seed", "expected an integer");
    }
  }
  s.experiment_id = get_string(root, "", "experiment_id", "");
  cfg.output_dir = get_string(root, "", "output_dir", ".");
  s.method = get_string(root, "", "method", "QHMC-both");
  const auto methods = known_methods();
  if (std::find(methods.begin(), methods.end(), s.method) == methods.end()) {
    fail("method", "unknown method '" + s.method + "'");
  }

  const json& q = section(root, "qhmc");
  reject_unknown(q, "qhmc", {"epsilon", "steps", "mu_m", "sigma_m", "n_samples", "burn_in"});
  s.qhmc.epsilon = get_number(q, "qhmc", "epsilon", s.qhmc.epsilon);
  if (!(s.qhmc.epsilon > 0.0)) fail("qhmc.epsilon", "must be > 0");
  s.qhmc.steps = get_int(q, "qhmc", "steps", s.qhmc.steps, 1);
  s.qhmc.mu_m = get_number(q, "qhmc", "mu_m", s.qhmc.mu_m);
  s.qhmc.sigma_m = get_number(q, "qhmc", "sigma_m", s.qhmc.sigma_m);
  if (s.qhmc.sigma_m < 0.0) fail("qhmc.sigma_m", "must be >= 0");
  s.qhmc.n_samples = get_int(q, "qhmc", "n_samples", s.qhmc.n_samples, 1);
  s.qhmc.burn_in = get_int(q, "qhmc", "burn_in", s.qhmc.burn_in, 0);

  const json& c = section(root, "constraints");
  reject_unknown(c, "constraints", {"kind", "bound", "active_dims", "mode", "eta", "penalty_weight"});
  const std::string kind = get_string(c, "constraints", "kind", to_string(s.bench.constraint_kind));
  if (kind == "value_lower_bound") {
    s.bench.constraint_kind = ConstraintKind::ValueLowerBound;
  } else if (kind == "monotone") {
    s.bench.constraint_kind = ConstraintKind::Monotone;
  } else {
    fail("constraints.kind", "expected 'value_lower_bound' or 'monotone'");
  }
  s.bench.bound = get_number(c, "constraints", "bound", s.bench.bound);
  if (c.contains("active_dims")) {
    const json& dims = c.at("active_dims");
    if (!dims.is_array()) fail("constraints.active_dims", "expected an array of integers");
    for (const json& d : dims) {
      if (!d.is_number_integer()) fail("constraints.active_dims", "expected integers");
      const int k = d.get<int>();
      if (k < 0 || k >= s.bench.dim) fail("constraints.active_dims", "dimension " + std::to_string(k) + " out of range");
      s.active_dims.push_back(k);
    }
  }
  const std::string mode = get_string(c, "constraints", "mode", to_string(s.mode));
  if (mode == "hard") {
    s.mode = ConstraintMode::Hard;
  } else if (mode == "soft") {
    s.mode = ConstraintMode::Soft;
  } else {
    fail("constraints.mode", "expected 'hard' or 'soft'");
  }
  s.eta = get_number(c, "constraints", "eta", s.eta);
  if (!(s.eta > 0.0 && s.eta < 0.5)) fail("constraints.eta", "must lie in (0, 0.5)");
  s.penalty_weight = get_number(c, "constraints", "penalty_weight", s.penalty_weight);
  if (s.penalty_weight < 0.0) fail("constraints.penalty_weight", "must be >= 0");

  const json& a = section(root, "adaptive");
  reject_unknown(a, "adaptive", {"strategy", "max_constraints", "n_candidates", "variance_threshold", "initial_constraints"});
  const std::string strategy = get_string(a, "adaptive", "strategy", to_string(s.strategy));
  try {
    s.strategy = strategy_from_string(strategy);
  } catch (const InvalidArgument&) {
    fail("adaptive.strategy", "expected constraint_adaptive, variance_adaptive or combined");
  }
  s.n_candidates = get_int(a, "adaptive", "n_candidates", s.n_candidates, 1);
  s.max_constraints = get_int(a, "adaptive", "max_constraints", s.max_constraints, 0);
  if (s.max_constraints > s.n_candidates) fail("adaptive.max_constraints", "exceeds adaptive.n_candidates");
  s.variance_threshold = get_number(a, "adaptive", "variance_threshold", s.variance_threshold);
  if (!(s.variance_threshold > 0.0)) fail("adaptive.variance_threshold", "must be > 0");
  s.initial_constraints = get_points(a, "adaptive", "initial_constraints", s.bench.dim);

  const json& sw = section(root, "sweep");
  reject_unknown(sw, "sweep", {"n_train", "snr_percent"});
  if (sw.contains("n_train")) {
    if (!sw.at("n_train").is_array()) fail("sweep.n_train", "expected an array");
    for (const json& v : sw.at("n_train")) {
      if (!v.is_number_integer() || v.get<long long>() < 1) fail("sweep.n_train", "entries must be integers >= 1");
      cfg.sweep_n_train.push_back(v.get<int>());
    }
  }
  if (sw.contains("snr_percent")) {
    if (!sw.at("snr_percent").is_array()) fail("sweep.snr_percent", "expected an array");
    for (const json& v : sw.at("snr_percent")) {
      if (!v.is_number() || v.get<double>() < 0.0) fail("sweep.snr_percent", "entries must be numbers >= 0");
      cfg.sweep_snr_percent.push_back(v.get<double>());
    }
  }

  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

json RunConfig::to_json() const {
  const ExperimentSettings s = apply_method(settings);
  json points = json::array();
  for (Eigen::Index i = 0; i < s.initial_constraints.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < s.initial_constraints.cols(); ++j) row.push_back(s.initial_constraints(i, j));
    points.push_back(row);
  }
  return json{
      {"experiment_id", s.experiment_id},
      {"method", s.method},
      {"seed", s.bench.seed},
      {"output_dir", output_dir},
      {"benchmark",
       {{"function", s.bench.function_name},
        {"dim", s.bench.dim},
        {"lower", s.bench.lower},
        {"upper", s.bench.upper},
        {"n_train", s.bench.n_train},
        {"n_test", s.bench.n_test},
        {"snr_percent", s.bench.snr_percent}}},
      {"qhmc",
       {{"epsilon", s.qhmc.epsilon},
        {"steps", s.qhmc.steps},
        {"mu_m", s.qhmc.mu_m},
        {"sigma_m", s.qhmc.sigma_m},
        {"n_samples", s.qhmc.n_samples},
        {"burn_in", s.qhmc.burn_in}}},
      {"constraints",
       {{"kind", to_string(s.bench.constraint_kind)},
        {"bound", s.bench.bound},
        {"active_dims", s.active_dims},
        {"mode", to_string(s.mode)},
        {"eta", s.eta},
        {"penalty_weight", s.penalty_weight}}},
      {"adaptive",
       {{"strategy", to_string(s.strategy)},
        {"max_constraints", s.max_constraints},
        {"n_candidates", s.n_candidates},
        {"variance_threshold", s.variance_threshold},
        {"initial_constraints", points}}},
      {"sweep", {{"n_train", sweep_n_train}, {"snr_percent", sweep_snr_percent}}},
  };
}

}  // namespace qhmcgp
