#include "qhmcgp/selftest.hpp"

#include <cmath>
#include <sstream>

#include "qhmcgp/error.hpp"
#include "qhmcgp/sampler.hpp"

namespace qhmcgp {

namespace {

std::string describe(double value, double limit) {
  std::ostringstream os;
  os << "worst " << value << " (limit " << limit << ")";
  return os.str();
}

CheckResult check_gaussian_moments(std::uint64_t seed) {
  QhmcConfig cfg;
  cfg.epsilon = 0.1;
  cfg.steps = 10;
  cfg.mu_m = 0.0;
  cfg.sigma_m = 0.5;
  cfg.n_samples = 50000;
  cfg.burn_in = 2000;
  cfg.seed = seed;
  const SampleChain chain = run_chain([](const Vector& x) { return 0.5 * x.squaredNorm(); },
                                      [](const Vector& x) -> Vector { return x; }, Vector::Zero(3), cfg);
  Vector mean = Vector::Zero(3), sq = Vector::Zero(3);
  for (const Vector& s : chain.samples) {
    mean += s;
    sq += s.cwiseProduct(s);
  }
  const double n = static_cast<double>(chain.samples.size());
  mean /= n;
  const Vector var = sq / n - mean.cwiseProduct(mean);
  const bool ok = mean.cwiseAbs().maxCoeff() <= 0.05 && var.minCoeff() >= 0.9 && var.maxCoeff() <= 1.1;
  std::ostringstream os;
  os << "mean " << mean.transpose() << ", var " << var.transpose() << ", acceptance " << chain.acceptance_rate;
  return {"gaussian_moments", ok, os.str()};
}

CheckResult check_nll_gradient(const SelftestOptions& opt, Rng rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const GradientInstance inst = random_gradient_instance(rng, 15, 2);
    const Vector analytic = opt.gradient_override ? Vector(opt.gradient_override(inst.hyper, inst.data))
                                                  : Vector(nll_grad(inst.hyper, inst.data));
    const Vector fd = central_difference(
        [&](const Vector& th) { return potential(Hyperparams::from_vector(th), inst.data); }, inst.hyper.as_vector(),
        1e-6);
    worst = std::max(worst, max_relative_error(analytic, fd));
  }
  return {"nll_gradient_fd", worst < 1e-5, describe(worst, 1e-5)};
}

CheckResult check_penalized_gradient(Rng rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const GradientInstance inst = random_gradient_instance(rng, 15, 2);
    const ConstraintSet cset = violated_constraint(inst, rng, 0.05 + 0.1 * rng.uniform());
    const Vector analytic = penalized_gradient(inst.hyper, inst.data, cset);
    const Vector fd = central_difference(
        [&](const Vector& th) { return penalized_potential(Hyperparams::from_vector(th), inst.data, cset); },
        inst.hyper.as_vector(), 1e-5);
    worst = std::max(worst, max_relative_error(analytic, fd));
  }
  return {"penalized_gradient_fd", worst < 1e-3, describe(worst, 1e-3)};
}

CheckResult check_leapfrog_reversibility(Rng rng) {
  const GradientFn grad = [](const Vector& x) -> Vector {
    return (4.0 * x.array() * (x.array().square() - 1.0)).matrix();
  };
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    Vector x0(3), q0(3);
    for (int i = 0; i < 3; ++i) {
      x0[i] = 2.0 * rng.uniform() - 1.0;
      q0[i] = rng.normal();
    }
    const double mass = std::exp(0.5 * rng.normal());
    const LeapfrogState fwd = leapfrog(x0, q0, mass, 0.05, 10, grad);
    const LeapfrogState back = leapfrog(fwd.x, -fwd.q, mass, 0.05, 10, grad);
    worst = std::max({worst, (back.x - x0).cwiseAbs().maxCoeff(), (back.q + q0).cwiseAbs().maxCoeff()});
  }
  return {"leapfrog_reversibility", worst < 1e-10, describe(worst, 1e-10)};
}

CheckResult check_kernel_derivatives(Rng rng) {
  double worst_first = 0.0, worst_second = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(rng.index(5));
    Vector x(d), xp(d);
    for (int i = 0; i < d; ++i) {
      x[i] = 4.0 * rng.uniform() - 2.0;
      xp[i] = 4.0 * rng.uniform() - 2.0;
    }
    const Hyperparams h = Hyperparams::from_linear(std::exp(rng.uniform() - 0.5), 0.7 + 1.5 * rng.uniform(), 0.1);
    const int i = static_cast<int>(rng.index(d));
    const double scale = h.sigma() * h.sigma() / (h.length() * h.length());

    auto k_at = [&](const Vector& a, const Vector& b) { return se_kernel(a, b, h); };
    auto dxp_fd = [&](const Vector& a, const Vector& b, double step) {
      Vector up = b, down = b;
      up[i] += step;
      down[i] -= step;
      return (k_at(a, up) - k_at(a, down)) / (2.0 * step);
    };
    const double first = se_kernel_dxp(x, xp, h, i);
    const double first_fd = dxp_fd(x, xp, 1e-5);
    worst_first = std::max(worst_first, std::fabs(first - first_fd) / std::max(std::fabs(first_fd), 1e-6 * scale));

    const double step = 1e-4;
    Vector xu = x, xd = x;
    xu[i] += step;
    xd[i] -= step;
    const double second = se_kernel_dxdxp(x, xp, h, i);
    const double second_fd = (dxp_fd(xu, xp, step) - dxp_fd(xd, xp, step)) / (2.0 * step);
    worst_second =
        std::max(worst_second, std::fabs(second - second_fd) / std::max(std::fabs(second_fd), 1e-3 * scale));
  }
  const bool ok = worst_first < 1e-6 && worst_second < 1e-4;
  return {"kernel_derivative_fd", ok,
          "first " + describe(worst_first, 1e-6) + "; second " + describe(worst_second, 1e-4)};
}

}  // namespace

GradientInstance random_gradient_instance(Rng& rng, int n, int dim) {
  Matrix X(n, dim);
  Vector y(n);
  for (int a = 0; a < n; ++a) {
    for (int j = 0; j < dim; ++j) X(a, j) = rng.uniform();
    y[a] = std::sin(3.0 * X(a, 0)) + (dim > 1 ? X(a, 1) * X(a, 1) : 0.0) + 0.1 * rng.normal();
  }
  const Hyperparams h{2.0 * rng.uniform() - 1.0, -1.5 + 2.0 * rng.uniform(), -3.0 + 2.0 * rng.uniform()};
  return {h, Dataset::make(std::move(X), y)};
}

ConstraintSet violated_constraint(const GradientInstance& inst, Rng& rng, double depth) {
  ConstraintSet cset;
  cset.mode = ConstraintMode::Soft;
  Vector x(inst.data.dim());
  for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = rng.uniform();
  cset.add_point(x);
  const PosteriorSummary post = posterior(inst.hyper, inst.data, cset.points);
  cset.bound = post.mean[0] - cset.beta() * post.std[0] + depth;
  return cset;
}

Vector central_difference(const std::function<double(const Vector&)>& f, const Vector& x, double step) {
  Vector g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vector up = x, down = x;
    up[k] += step;
    down[k] -= step;
    g[k] = (f(up) - f(down)) / (2.0 * step);
  }
  return g;
}

double max_relative_error(const Vector& a, const Vector& b) {
  const double scale = b.cwiseAbs().maxCoeff();
  const double diff = (a - b).cwiseAbs().maxCoeff();
  return scale > 0.0 ? diff / scale : diff;
}

std::vector<CheckResult> run_selftest(const SelftestOptions& options) {
  const Rng root(options.seed);
  std::vector<CheckResult> out;
  auto guarded = [&](const char* name, auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded("gaussian_moments", [&] { return check_gaussian_moments(root.split(1).seed()); });
  guarded("nll_gradient_fd", [&] { return check_nll_gradient(options, root.split(2)); });
  guarded("penalized_gradient_fd", [&] { return check_penalized_gradient(root.split(3)); });
  guarded("leapfrog_reversibility", [&] { return check_leapfrog_reversibility(root.split(4)); });
  guarded("kernel_derivative_fd", [&] { return check_kernel_derivatives(root.split(5)); });
  return out;
}

}  // namespace qhmcgp
