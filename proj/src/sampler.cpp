#include "qhmcgp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qhmcgp/error.hpp"

namespace qhmcgp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_potential(const PotentialFn& potential, const Vector& x) {
  if (!x.allFinite()) return kInf;
  try {
    const double u = potential(x);
    return std::isnan(u) ? kInf : u;
  } catch (const Error&) {
    return kInf;
  }
}

double kinetic(const Vector& q, double mass) { return 0.5 * q.squaredNorm() / mass; }

// One proposal at fixed mass. Returns true on acceptance and updates (x, u).
bool transition(Vector& x, double& u, double mass, const QhmcConfig& config,
                const PotentialFn& potential, const GradientFn& gradient, Rng& rng) {
  const Vector q = sample_momentum(x.size(), mass, rng);
  const double h_current = u + kinetic(q, mass);

  LeapfrogState proposal;
  try {
    proposal = leapfrog(x, q, mass, config.epsilon, config.steps, gradient);
  } catch (const Error&) {
    proposal.ok = false;
  }
  double u_prop = kInf;
  double h_prop = kInf;
  if (proposal.ok) {
    u_prop = safe_potential(potential, proposal.x);
    h_prop = u_prop + kinetic(proposal.q, mass);
  }
  if (!mh_accept(h_current, h_prop, rng)) return false;
  x = std::move(proposal.x);
  u = u_prop;
  return true;
}

template <class MassFn>
SampleChain drive(const PotentialFn& potential, const GradientFn& gradient, const Vector& init,
                  const QhmcConfig& config, MassFn&& next_mass) {
  config.validate();
  if (!init.allFinite()) throw InvalidArgument("run_chain: non-finite initial point");

  Rng rng(config.seed);
  Vector x = init;
  double u = safe_potential(potential, x);

  SampleChain chain;
  const int total = config.burn_in + config.n_samples;
  chain.samples.reserve(config.n_samples);
  chain.potentials.reserve(config.n_samples);
  chain.accepted.reserve(total);
  chain.masses.reserve(total);

  int n_accepted = 0;
  for (int t = 0; t < total; ++t) {
    const double mass = next_mass(rng);
    const bool acc = transition(x, u, mass, config, potential, gradient, rng);
    n_accepted += acc ? 1 : 0;
    chain.accepted.push_back(acc);
    chain.masses.push_back(mass);
    if (t >= config.burn_in) {
      chain.samples.push_back(x);
      chain.potentials.push_back(u);
    }
  }
  if (n_accepted == 0) {
    throw ChainFailure("chain accepted none of " + std::to_string(total) +
                       " proposals; try a smaller step size epsilon (currently " +
                       std::to_string(config.epsilon) + ")");
  }
  chain.acceptance_rate = static_cast<double>(n_accepted) / total;
  return chain;
}

}  // namespace

void QhmcConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("qhmc: epsilon must be > 0");
  if (steps < 1) throw InvalidArgument("qhmc: steps must be >= 1");
  if (!(sigma_m >= 0.0) || !std::isfinite(mu_m)) throw InvalidArgument("qhmc: need sigma_m >= 0, finite mu_m");
  if (n_samples < 1) throw InvalidArgument("qhmc: n_samples must be >= 1");
  if (burn_in < 0) throw InvalidArgument("qhmc: burn_in must be >= 0");
}

std::size_t SampleChain::argmin_potential() const {
  if (potentials.empty()) throw ChainFailure("empty chain");
  return static_cast<std::size_t>(std::min_element(potentials.begin(), potentials.end()) -
                                  potentials.begin());
}

double sample_mass(const QhmcConfig& config, Rng& rng) {
  // No draw for a degenerate law, so sigma_m = 0 consumes the same stream as fixed-mass HMC.
  if (config.sigma_m == 0.0) return std::exp(config.mu_m);
  return std::exp(config.mu_m + config.sigma_m * rng.normal());
}

Vector sample_momentum(Eigen::Index dim, double mass, Rng& rng) {
  const double scale = std::sqrt(mass);
  Vector q(dim);
  for (Eigen::Index i = 0; i < dim; ++i) q[i] = scale * rng.normal();
  return q;
}

LeapfrogState leapfrog(const Vector& x0, const Vector& q0, double mass, double epsilon, int steps,
                       const GradientFn& grad_U) {
  if (!(mass > 0.0)) throw InvalidArgument("leapfrog: mass must be > 0");
  if (steps < 1) throw InvalidArgument("leapfrog: steps must be >= 1");
  LeapfrogState s{x0, q0, true};
  auto kick = [&](double h) {
    const Vector g = grad_U(s.x);
    if (!g.allFinite()) {
      s.ok = false;
      return false;
    }
    s.q -= h * g;
    return true;
  };
  const double inv_mass = 1.0 / mass;
  if (!kick(0.5 * epsilon)) return s;
  for (int i = 1; i < steps; ++i) {
    s.x += epsilon * inv_mass * s.q;
    if (!kick(epsilon)) return s;
  }
  s.x += epsilon * inv_mass * s.q;
  kick(0.5 * epsilon);
  return s;
}

bool mh_accept(double H_current, double H_proposed, Rng& rng) {
  const double u = rng.uniform();
  if (std::isnan(H_proposed) || H_proposed == kInf) return false;
  if (H_proposed <= H_current) return true;
  return u < std::exp(H_current - H_proposed);
}

SampleChain run_chain(const PotentialFn& potential, const GradientFn& gradient, const Vector& init,
                      const QhmcConfig& config) {
  return drive(potential, gradient, init, config, [&](Rng& rng) { return sample_mass(config, rng); });
}

SampleChain run_hmc(const PotentialFn& potential, const GradientFn& gradient, const Vector& init,
                    const QhmcConfig& config, double mass) {
  if (!(mass > 0.0)) throw InvalidArgument("run_hmc: mass must be > 0");
  return drive(potential, gradient, init, config, [mass](Rng&) { return mass; });
}

double effective_sample_size(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 4) return static_cast<double>(n);
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : series) var += (v - mean) * (v - mean);
  var /= n;
  if (var == 0.0) return static_cast<double>(n);

  auto rho = [&](std::size_t lag) {
    double c = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) c += (series[i] - mean) * (series[i + lag] - mean);
    return c / (n * var);
  };
  // Sum consecutive autocorrelation pairs while they stay positive.
  double sum = 0.0;
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    const double pair = rho(2 * k) + rho(2 * k + 1);
    if (pair <= 0.0) break;
    sum += pair;
  }
  const double tau = std::max(1.0, 2.0 * sum - 1.0);
  return n / tau;
}

}  // namespace qhmcgp
