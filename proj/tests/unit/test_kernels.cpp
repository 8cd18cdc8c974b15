#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qhmcgp/error.hpp"
#include "qhmcgp/rng.hpp"

using namespace qhmcgp;
using testing::rows;
using testing::vec;

TEST_CASE("se_kernel closed form") {
  const auto unit = Hyperparams::from_linear(1.0, 1.0, 0.0);
  CHECK(se_kernel(vec({0.3}), vec({0.3}), unit, true) == doctest::Approx(1.0));
  CHECK(se_kernel(vec({0.0}), vec({std::sqrt(2.0)}), unit) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
  const auto noisy = Hyperparams::from_linear(1.0, 1.0, 0.1);
  CHECK(se_kernel(vec({0.5}), vec({0.5}), noisy, true) == doctest::Approx(1.01).epsilon(1e-14));
  // Coincident but distinct indices never pick up the noise term.
  CHECK(se_kernel(vec({0.5}), vec({0.5}), noisy, false) == doctest::Approx(1.0));
}

TEST_CASE("se_kernel_dxp") {
  const auto unit = Hyperparams::from_linear(1.0, 1.0, 0.0);
  CHECK(se_kernel_dxp(vec({0.4, 0.1}), vec({0.4, 0.1}), unit, 0) == 0.0);
  CHECK(se_kernel_dxp(vec({1.0}), vec({0.0}), unit, 0) == doctest::Approx(0.6065306597126334).epsilon(1e-14));
  const auto h = Hyperparams::from_linear(1.3, 0.7, 0.0);
  const Vector a = vec({0.2, -0.4, 1.1}), b = vec({-0.3, 0.5, 0.9});
  for (int i = 0; i < 3; ++i) CHECK(se_kernel_dxp(a, b, h, i) == doctest::Approx(-se_kernel_dxp(b, a, h, i)));
}

TEST_CASE("se_kernel_dxdxp") {
  CHECK(se_kernel_dxdxp(vec({0.2}), vec({0.2}), Hyperparams::from_linear(1.0, 0.5, 0.0), 0) ==
        doctest::Approx(4.0).epsilon(1e-14));
  CHECK(std::fabs(se_kernel_dxdxp(vec({1.0}), vec({0.0}), Hyperparams::from_linear(1.0, 1.0, 0.0), 0)) < 1e-15);
  const auto h = Hyperparams::from_linear(0.8, 1.4, 0.0);
  const Vector a = vec({0.2, -0.4}), b = vec({-0.3, 0.5});
  CHECK(se_kernel_dxdxp(a, b, h, 1) == doctest::Approx(se_kernel_dxdxp(b, a, h, 1)).epsilon(1e-14));
}

TEST_CASE("kernel derivatives match finite differences on random points") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + static_cast<int>(rng.index(4));
    Vector x(d), xp(d);
    for (int j = 0; j < d; ++j) {
      x[j] = 4.0 * rng.uniform() - 2.0;
      xp[j] = 4.0 * rng.uniform() - 2.0;
    }
    const auto h = Hyperparams::from_linear(0.5 + rng.uniform(), 0.8 + rng.uniform(), 0.0);
    const int i = static_cast<int>(rng.index(d));
    const double step = 1e-5;
    Vector up = xp, down = xp;
    up[i] += step;
    down[i] -= step;
    const double fd = (se_kernel(x, up, h) - se_kernel(x, down, h)) / (2 * step);
    CHECK(se_kernel_dxp(x, xp, h, i) == doctest::Approx(fd).epsilon(1e-6).scale(1e-6));
  }
}

TEST_CASE("cov_matrix") {
  const auto unit = Hyperparams::from_linear(1.0, 1.0, 0.0);
  const CovMatrix single = cov_matrix(rows({{0.5}}), unit, true);
  CHECK(single.entries.rows() == 1);
  CHECK(single.entries(0, 0) == doctest::Approx(1.0));

  const CovMatrix two = cov_matrix(rows({{0.0}, {std::sqrt(2.0)}}), unit, false);
  CHECK(two.entries(0, 1) == doctest::Approx(0.36787944117144233).epsilon(1e-14));

  const Matrix X = testing::reference_X();
  const CovMatrix K = cov_matrix(X, testing::reference_hyper(), true);
  CHECK((K.entries - K.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const CovMatrix cross = cov_matrix(X, X, testing::reference_hyper());
  CHECK((cross.entries - cross.entries.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  // Noise only on the diagonal of the training covariance.
  const double n2 = std::pow(testing::reference_hyper().noise(), 2);
  CHECK((K.entries - cross.entries).diagonal().isApproxToConstant(n2, 1e-12));
}

TEST_CASE("cross_cov_dxp columns are kernel derivatives") {
  const auto h = testing::reference_hyper();
  const Matrix Xq = rows({{0.3, 0.3}, {0.7, 0.7}});
  const Matrix X = testing::reference_X();
  const Matrix D = cross_cov_dxp(Xq, X, h, 1);
  REQUIRE(D.rows() == 2);
  REQUIRE(D.cols() == X.rows());
  CHECK(D(1, 3) == doctest::Approx(se_kernel_dxp(Xq.row(1).transpose(), X.row(3).transpose(), h, 1)));
}

TEST_CASE("cholesky_with_jitter") {
  const CholeskyResult id = cholesky_with_jitter(Matrix::Identity(3, 3));
  CHECK(id.jitter_applied == 0.0);
  CHECK(id.lower.isIdentity());

  const CholeskyResult two = cholesky_with_jitter(rows({{2, 1}, {1, 2}}));
  CHECK(two.jitter_applied == 0.0);
  CHECK(two.lower(0, 0) == doctest::Approx(1.4142135623730951));
  CHECK(two.lower(0, 1) == 0.0);
  CHECK(two.lower(1, 0) == doctest::Approx(0.7071067811865475));
  CHECK(two.lower(1, 1) == doctest::Approx(1.224744871391589));

  // Rank one: the first ladder rung (1e-10 times mean diagonal) is enough.
  const CholeskyResult rank1 = cholesky_with_jitter(rows({{1, 1}, {1, 1}}));
  CHECK(rank1.jitter_applied == doctest::Approx(1e-10));

  CHECK_THROWS_AS(cholesky_with_jitter(rows({{1, 0}, {0, -1}})), IllConditioned);
}

TEST_CASE("hyperparameter validation") {
  CHECK_NOTHROW(Hyperparams::from_linear(1.0, 1.0, 0.0).validate());
  CHECK_THROWS_AS((Hyperparams{std::nan(""), 0.0, 0.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS(Hyperparams::from_linear(-1.0, 1.0, 0.1), InvalidArgument);
}
