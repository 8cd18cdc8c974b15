#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "qhmcgp/error.hpp"
#include "qhmcgp/sampler.hpp"

using namespace qhmcgp;
using testing::vec;

namespace {

const PotentialFn kGaussU = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
const GradientFn kGaussG = [](const Vector& x) -> Vector { return x; };

struct Moments {
  Vector mean, var;
};

Moments moments(const std::vector<Vector>& s) {
  Vector mean = Vector::Zero(s.front().size()), var = Vector::Zero(s.front().size());
  for (const auto& v : s) mean += v;
  mean /= static_cast<double>(s.size());
  for (const auto& v : s) var += (v - mean).cwiseAbs2();
  var /= static_cast<double>(s.size());
  return {mean, var};
}

}  // namespace

TEST_CASE("config validation") {
  QhmcConfig c;
  CHECK_NOTHROW(c.validate());
  c.epsilon = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.steps = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.sigma_m = -0.1;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.n_samples = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("sample_mass") {
  Rng rng(1);
  QhmcConfig c;
  c.sigma_m = 0.0;
  CHECK(sample_mass(c, rng) == 1.0);
  c.mu_m = std::log(2.0);
  CHECK(sample_mass(c, rng) == doctest::Approx(2.0).epsilon(1e-15));

  c.mu_m = 0.0;
  c.sigma_m = 1.0;
  double s = 0, s2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double lm = std::log(sample_mass(c, rng));
    s += lm;
    s2 += lm * lm;
  }
  const double mean = s / n, sd = std::sqrt(s2 / n - mean * mean);
  CHECK(std::fabs(mean) < 0.02);
  CHECK(std::fabs(sd - 1.0) < 0.02);
}

TEST_CASE("sample_momentum covariance is m I") {
  Rng rng(2);
  const double m = 3.0;
  const int n = 100000;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) {
    const Vector q = sample_momentum(2, m, rng);
    cov += q * q.transpose();
  }
  cov /= n;
  CHECK(cov(0, 0) == doctest::Approx(m).epsilon(0.03));
  CHECK(cov(1, 1) == doctest::Approx(m).epsilon(0.03));
  CHECK(std::fabs(cov(0, 1)) < 0.05);
}

TEST_CASE("leapfrog") {
  SUBCASE("free particle") {
    const Vector x0 = vec({0.5, -1.0}), q0 = vec({0.3, 0.7});
    const LeapfrogState s = leapfrog(x0, q0, 1.0, 0.1, 10, [](const Vector& x) -> Vector { return Vector::Zero(x.size()); });
    CHECK((s.x - (x0 + 10 * 0.1 * q0)).norm() < 1e-14);
    CHECK((s.q - q0).norm() == 0.0);
  }
  SUBCASE("harmonic energy error") {
    const LeapfrogState s = leapfrog(vec({1.0}), vec({0.0}), 1.0, 0.1, 10, kGaussG);
    const double h0 = 0.5, h1 = 0.5 * s.x.squaredNorm() + 0.5 * s.q.squaredNorm();
    CHECK(std::fabs(h1 - h0) < 1e-3);
  }
  SUBCASE("reversibility") {
    const GradientFn g = [](const Vector& x) -> Vector { return (x.array().cube() - x.array()).matrix(); };
    const Vector x0 = vec({0.4, -1.2, 0.9}), q0 = vec({1.1, 0.2, -0.6});
    const LeapfrogState fwd = leapfrog(x0, q0, 2.5, 0.05, 25, g);
    const LeapfrogState back = leapfrog(fwd.x, -fwd.q, 2.5, 0.05, 25, g);
    CHECK((back.x - x0).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((back.q + q0).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("non-finite gradient stops the trajectory") {
    const LeapfrogState s = leapfrog(vec({1.0}), vec({1.0}), 1.0, 0.1, 5, [](const Vector& x) -> Vector {
      return x[0] > 1.2 ? vec({std::nan("")}) : x;
    });
    CHECK_FALSE(s.ok);
  }
}

TEST_CASE("mh_accept") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    CHECK(mh_accept(1.0, 0.5, rng));
    CHECK(mh_accept(1.0, 1.0, rng));
    CHECK_FALSE(mh_accept(1.0, std::numeric_limits<double>::infinity(), rng));
    CHECK_FALSE(mh_accept(1.0, std::nan(""), rng));
  }
  int acc = 0;
  for (int i = 0; i < 100000; ++i) acc += mh_accept(0.0, std::log(4.0), rng);
  CHECK(acc / 1e5 == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("mh_accept draws a uniform on every call") {
  Rng a(9), b(9);
  mh_accept(1.0, 0.0, a);
  b.uniform();
  CHECK(a.uniform() == b.uniform());
}

TEST_CASE("Gaussian target moments") {
  QhmcConfig c;
  c.epsilon = 0.1;
  c.steps = 10;
  c.sigma_m = 0.5;
  c.n_samples = 50000;
  c.burn_in = 2000;
  c.seed = 42;
  const SampleChain chain = run_chain(kGaussU, kGaussG, Vector::Zero(3), c);
  CHECK(chain.samples.size() == 50000);
  CHECK(chain.potentials.size() == 50000);
  CHECK(chain.accepted.size() == 52000);
  CHECK(chain.acceptance_rate >= 0.6);
  CHECK(chain.acceptance_rate <= 1.0);
  const Moments m = moments(chain.samples);
  CHECK(m.mean.cwiseAbs().maxCoeff() <= 0.05);
  CHECK(m.var.minCoeff() >= 0.9);
  CHECK(m.var.maxCoeff() <= 1.1);
}

TEST_CASE("determinism and HMC degeneration") {
  QhmcConfig c;
  c.epsilon = 0.2;
  c.n_samples = 500;
  c.burn_in = 100;
  c.seed = 7;
  const SampleChain a = run_chain(kGaussU, kGaussG, Vector::Ones(2), c);
  const SampleChain b = run_chain(kGaussU, kGaussG, Vector::Ones(2), c);
  CHECK(a.potentials == b.potentials);
  CHECK(a.accepted == b.accepted);

  c.sigma_m = 0.0;
  const SampleChain q = run_chain(kGaussU, kGaussG, Vector::Ones(2), c);
  const SampleChain h = run_hmc(kGaussU, kGaussG, Vector::Ones(2), c, 1.0);
  CHECK(q.potentials == h.potentials);
  for (std::size_t i = 0; i < q.samples.size(); ++i) CHECK(q.samples[i] == h.samples[i]);
}

TEST_CASE("double-well: QHMC visits both modes") {
  // U = (x^2 - 1)^2 / 0.3: barrier of height 10/3 at the origin.
  const PotentialFn U = [](const Vector& x) { return std::pow(x[0] * x[0] - 1.0, 2) / 0.3; };
  const GradientFn G = [](const Vector& x) -> Vector { return vec({4.0 * x[0] * (x[0] * x[0] - 1.0) / 0.3}); };
  QhmcConfig c;
  c.epsilon = 0.05;
  c.steps = 20;
  c.sigma_m = 1.5;
  c.n_samples = 20000;
  c.burn_in = 500;
  c.seed = 3;
  const SampleChain chain = run_chain(U, G, vec({1.0}), c);
  int left = 0;
  for (const auto& s : chain.samples) left += s[0] < 0.0;
  const double frac = left / static_cast<double>(chain.samples.size());
  CHECK(frac > 0.2);
  CHECK(frac < 0.8);
}

TEST_CASE("an infinite start with no escape raises ChainFailure") {
  const PotentialFn U = [](const Vector&) { return std::numeric_limits<double>::infinity(); };
  QhmcConfig c;
  c.n_samples = 20;
  c.burn_in = 0;
  CHECK_THROWS_AS(run_chain(U, kGaussG, Vector::Zero(2), c), ChainFailure);
}

TEST_CASE("effective sample size") {
  std::vector<double> iid(5000);
  Rng rng(4);
  for (double& v : iid) v = rng.normal();
  CHECK(effective_sample_size(iid) > 3500);
  // Strongly autocorrelated AR(1) with rho = 0.95: ESS ~ n (1-rho)/(1+rho).
  std::vector<double> ar(20000);
  double x = 0;
  for (double& v : ar) v = x = 0.95 * x + std::sqrt(1 - 0.95 * 0.95) * rng.normal();
  const double ess = effective_sample_size(ar);
  CHECK(ess > 20000 * 0.0256 * 0.6);
  CHECK(ess < 20000 * 0.0256 * 1.6);
}
