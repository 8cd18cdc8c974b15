#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qhmcgp/kernels.hpp"
#include "qhmcgp/rng.hpp"

namespace qhmcgp {

/// Settings of a quantum-inspired HMC chain.
///
/// Each iteration draws a scalar mass m with log m ~ N(mu_m, sigma_m^2) and
/// uses M = m I for that proposal. sigma_m = 0 is plain HMC with mass e^{mu_m}.
struct QhmcConfig {
  double epsilon = 0.01;
  int steps = 10;
  double mu_m = 0.0;
  double sigma_m = 1.0;
  int n_samples = 2000;
  int burn_in = 500;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SampleChain {
  std::vector<Vector> samples;
  std::vector<double> potentials;
  std::vector<bool> accepted;  // every iteration, burn-in included
  std::vector<double> masses;  // mass drawn at every iteration
  double acceptance_rate = 0.0;

  /// Index of the post-burn-in sample with the smallest potential.
  std::size_t argmin_potential() const;
};

using PotentialFn = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;

double sample_mass(const QhmcConfig& config, Rng& rng);

/// q ~ N(0, m I).
Vector sample_momentum(Eigen::Index dim, double mass, Rng& rng);

struct LeapfrogState {
  Vector x;
  Vector q;
  bool ok = true;  // false when a non-finite gradient was met
};

/// Half kick, L-1 (drift, full kick) pairs, final drift and half kick.
LeapfrogState leapfrog(const Vector& x0, const Vector& q0, double mass, double epsilon, int steps,
                       const GradientFn& grad_U);

/// Metropolis test on total energies. A uniform is drawn on every call.
bool mh_accept(double H_current, double H_proposed, Rng& rng);

/// QHMC chain: per-iteration mass, momentum, leapfrog and MH correction.
/// Throws ChainFailure if no proposal is ever accepted.
SampleChain run_chain(const PotentialFn& potential, const GradientFn& gradient, const Vector& init,
                      const QhmcConfig& config);

/// Fixed-mass HMC; uses epsilon, steps, n_samples, burn_in and seed from `config`.
SampleChain run_hmc(const PotentialFn& potential, const GradientFn& gradient, const Vector& init,
                    const QhmcConfig& config, double mass);

/// Effective sample size of a scalar series (Geyer initial positive sequence).
double effective_sample_size(const std::vector<double>& series);

}  // namespace qhmcgp
