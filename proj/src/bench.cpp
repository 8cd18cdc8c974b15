#include "qhmcgp/bench.hpp"

#include <cmath>
#include <numbers>

#include "qhmcgp/error.hpp"

namespace qhmcgp {

namespace {

double ackley(const Vector& x) {
  constexpr double a = 20.0, b = 0.2, c = 2.0 * std::numbers::pi;
  const double d = static_cast<double>(x.size());
  double sq = 0.0, cs = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    sq += x[i] * x[i];
    cs += std::cos(c * x[i]);
  }
  return -a * std::exp(-b * std::sqrt(sq / d)) - std::exp(cs / d) + a + std::numbers::e;
}

double arctan_sum(const Vector& x) {
  const double d = static_cast<double>(x.size());
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double w = 5.0 * (1.0 - static_cast<double>(i + 1) / (d + 1.0));
    s += std::atan(w * x[i]);
  }
  return s;
}

double mono5d(const Vector& x) {
  return std::atan(5.0 * x[0]) + std::atan(2.0 * x[1]) + x[2] + 2.0 * x[3] * x[3] +
         2.0 / (1.0 + std::exp(-10.0 * (x[4] - 0.5)));
}

double population_std(const Vector& y) {
  const double m = y.mean();
  return std::sqrt((y.array() - m).square().mean());
}

}  // namespace

bool is_known_function(const std::string& name) {
  return name == "arctan2d" || name == "ackley10d" || name == "mono5d" || name == "arctan_sum_nd";
}

int required_dim(const std::string& name) {
  if (name == "arctan2d") return 2;
  if (name == "ackley10d") return 10;
  if (name == "mono5d") return 5;
  if (name == "arctan_sum_nd") return 0;
  throw InvalidArgument("unknown function '" + name + "'");
}

BenchmarkSpec BenchmarkSpec::defaults_for(const std::string& function_name) {
  BenchmarkSpec s;
  s.function_name = function_name;
  if (function_name == "arctan2d") {
    s.dim = 2;
  } else if (function_name == "ackley10d") {
    s.dim = 10;
    s.lower = -10.0;
    s.upper = 10.0;
    s.bound = 5.0;
  } else if (function_name == "mono5d") {
    s.dim = 5;
    s.constraint_kind = ConstraintKind::Monotone;
  } else if (function_name == "arctan_sum_nd") {
    s.dim = 20;
    s.constraint_kind = ConstraintKind::Monotone;
  } else {
    throw InvalidArgument("unknown function '" + function_name + "'");
  }
  return s;
}

void BenchmarkSpec::validate() const {
  const int need = required_dim(function_name);
  if (dim < 1 || (need != 0 && dim != need)) {
    throw InvalidArgument("benchmark: " + function_name + " needs dim " +
                          std::to_string(need == 0 ? 1 : need) + ", got " + std::to_string(dim));
  }
  if (n_train < 1) throw InvalidArgument("benchmark: n_train must be >= 1");
  if (n_test < 1) throw InvalidArgument("benchmark: n_test must be >= 1");
  if (!(snr_percent >= 0.0)) throw InvalidArgument("benchmark: snr_percent must be >= 0");
  if (!(upper > lower)) throw InvalidArgument("benchmark: domain upper must exceed lower");
}

double target(const std::string& function_name, const Vector& x) {
  const int need = required_dim(function_name);
  if ((need != 0 && x.size() != need) || x.size() == 0) {
    throw InvalidArgument("target: " + function_name + " expects dim " + std::to_string(need) + ", got " +
                          std::to_string(x.size()));
  }
  if (function_name == "arctan2d") return std::atan(5.0 * x[0]) + std::atan(x[1]);
  if (function_name == "ackley10d") return ackley(x);
  if (function_name == "mono5d") return mono5d(x);
  return arctan_sum(x);
}

BenchmarkData make_dataset(const BenchmarkSpec& spec, Rng& rng) {
  spec.validate();
  Rng train_rng = rng.split(1);
  Rng test_rng = rng.split(2);
  Rng noise_rng = rng.split(3);
  const double width = spec.upper - spec.lower;

  auto draw = [&](int n, Rng& r) {
    Matrix X(n, spec.dim);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < spec.dim; ++j) X(i, j) = spec.lower + width * r.uniform();
    }
    return X;
  };
  auto evaluate = [&](const Matrix& X) {
    Vector y(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) y[i] = target(spec.function_name, X.row(i).transpose());
    return y;
  };

  BenchmarkData out;
  Matrix X = draw(spec.n_train, train_rng);
  out.train_clean = evaluate(X);
  out.train = Dataset::make(std::move(X), add_noise(out.train_clean, spec.snr_percent, noise_rng));
  out.test_X = draw(spec.n_test, test_rng);
  out.test_truth = evaluate(out.test_X);
  return out;
}

Vector add_noise(const Vector& y_clean, double snr_percent, Rng& rng) {
  if (!(snr_percent >= 0.0)) throw InvalidArgument("add_noise: snr_percent must be >= 0");
  if (snr_percent == 0.0) return y_clean;
  const double scale = population_std(y_clean);
  if (!(scale > 0.0)) throw InvalidArgument("add_noise: constant signal has no noise scale");
  const double sd = snr_percent / 100.0 * scale;
  Vector y = y_clean;
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += sd * rng.normal();
  return y;
}

double relative_error(const Vector& y_pred, const Vector& y_true) {
  if (y_pred.size() != y_true.size() || y_true.size() == 0) {
    throw InvalidArgument("relative_error: vectors must have equal, nonzero length");
  }
  const double den = y_true.squaredNorm();
  if (den == 0.0) throw InvalidArgument("relative_error: truth is identically zero");
  return std::sqrt((y_pred - y_true).squaredNorm() / den);
}

}  // namespace qhmcgp
