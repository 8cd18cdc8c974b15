#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qhmcgp/error.hpp"
#include "qhmcgp/gp_model.hpp"
#include "qhmcgp/rng.hpp"
#include "qhmcgp/selftest.hpp"

using namespace qhmcgp;
using testing::rows;
using testing::vec;

namespace {

Dataset reference_data() { return Dataset::make(testing::reference_X(), testing::reference_y()); }

}  // namespace

TEST_CASE("Dataset validation and centering") {
  const Dataset d = reference_data();
  CHECK(d.y_mean == doctest::Approx(1.0235840456665857).epsilon(1e-14));
  CHECK(std::fabs(d.y.sum()) < 1e-14);
  CHECK_THROWS_AS(Dataset::make(rows({{0.1}, {0.1}}), vec({1, 2})), InvalidArgument);
  CHECK_THROWS_AS(Dataset::make(rows({{0.1}, {0.2}}), vec({1, std::nan("")})), InvalidArgument);
  CHECK_THROWS_AS(Dataset::make(rows({{0.1}, {0.2}}), vec({1})), InvalidArgument);
}

TEST_CASE("nll closed-form single point") {
  const auto unit = Hyperparams::from_linear(1.0, 1.0, 0.0);
  CHECK(nll(unit, Dataset::make(rows({{0.0}}), vec({0.0}), false)) ==
        doctest::Approx(0.9189385332046727).epsilon(1e-14));
  CHECK(nll(unit, Dataset::make(rows({{0.0}}), vec({2.0}), false)) ==
        doctest::Approx(2.9189385332046727).epsilon(1e-14));
}

TEST_CASE("nll, potential and gradient against the numpy reference") {
  const Dataset d = reference_data();
  const Hyperparams h = testing::reference_hyper();
  CHECK(nll(h, d) == doctest::Approx(5.013988536191702).epsilon(1e-12));
  CHECK(potential(h, d) == doctest::Approx(5.880238536191702).epsilon(1e-12));
  const Eigen::Vector3d g = nll_grad(h, d);
  CHECK(g[0] == doctest::Approx(4.7527537427797615).epsilon(1e-8));
  CHECK(g[1] == doctest::Approx(-3.919876970888876).epsilon(1e-8));
  CHECK(g[2] == doctest::Approx(-0.5048617264099182).epsilon(1e-8));
}

TEST_CASE("nll is invariant to joint row permutation") {
  const Dataset d = reference_data();
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(d.size());
  perm.indices() << 3, 0, 5, 1, 4, 2;
  const Dataset shuffled = Dataset::make(perm * testing::reference_X(), perm * testing::reference_y());
  CHECK(nll(testing::reference_hyper(), shuffled) == doctest::Approx(nll(testing::reference_hyper(), d)));
}

TEST_CASE("nll_grad matches central differences on random instances") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const GradientInstance inst = random_gradient_instance(rng, 15, 2);
    const Vector fd = central_difference(
        [&](const Vector& t) { return potential(Hyperparams::from_vector(t), inst.data); }, inst.hyper.as_vector(),
        1e-6);
    CHECK(max_relative_error(nll_grad(inst.hyper, inst.data), fd) < 1e-5);
  }
}

TEST_CASE("gradient vanishes at a grid-search minimum") {
  Rng rng(17);
  const GradientInstance inst = random_gradient_instance(rng, 15, 2);
  const double log_noise = -2.0;
  // Coarse grid, then a fine grid around the coarse winner.
  double best = std::numeric_limits<double>::infinity(), bs = 0, bl = 0;
  auto scan = [&](double s0, double l0, double half, int n) {
    const double cs = s0, cl = l0;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const double s = cs - half + 2 * half * i / n, l = cl - half + 2 * half * j / n;
        const double u = potential({s, l, log_noise}, inst.data);
        if (u < best) best = u, bs = s, bl = l;
      }
    }
  };
  scan(0.0, 0.0, 3.0, 60);
  scan(bs, bl, 0.1, 200);
  scan(bs, bl, 0.002, 200);
  const Eigen::Vector3d g = nll_grad({bs, bl, log_noise}, inst.data);
  CHECK(std::fabs(g[0]) < 1e-2);
  CHECK(std::fabs(g[1]) < 1e-2);
}

TEST_CASE("scaling identity of the data-fit term") {
  // Scaling y by 2 with sigma and sigma_n doubled multiplies K by 4, so
  // y^T K^-1 y is unchanged and the log-sigma / log-noise gradients of the
  // pure nll (which do not depend on the prior) are unchanged too.
  const Dataset d = reference_data();
  const Dataset d2 = Dataset::make(testing::reference_X(), 2.0 * testing::reference_y());
  const Hyperparams h = testing::reference_hyper();
  const Hyperparams h2{h.log_sigma + std::log(2.0), h.log_length, h.log_noise + std::log(2.0)};
  const GpFit a(h, d), b(h2, d2);
  CHECK(d.y.dot(a.alpha()) == doctest::Approx(d2.y.dot(b.alpha())).epsilon(1e-12));
  const Eigen::Vector3d ga = a.nll_gradient(), gb = b.nll_gradient();
  for (int k = 0; k < 3; ++k) CHECK(std::fabs(ga[k] - gb[k]) < 1e-8);
  // nll shifts by exactly N log 2 through the log-determinant.
  CHECK(b.nll() - a.nll() == doctest::Approx(6 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("posterior against the numpy reference") {
  const Dataset d = reference_data();
  const PosteriorSummary p = posterior(testing::reference_hyper(), d, rows({{0.3, 0.3}, {0.7, 0.7}, {0.5, 0.1}}));
  const double ym = 1.0235840456665857;
  CHECK(p.mean[0] == doctest::Approx(ym - 0.43119813768930515).epsilon(1e-12));
  CHECK(p.mean[1] == doctest::Approx(ym + 0.3461698568745002).epsilon(1e-12));
  CHECK(p.mean[2] == doctest::Approx(ym - 0.4972294649352442).epsilon(1e-12));
  CHECK(p.std[0] == doctest::Approx(0.26905402618234286).epsilon(1e-10));
  CHECK(p.std[1] == doctest::Approx(0.15443212445752824).epsilon(1e-10));
  CHECK(p.std[2] == doctest::Approx(0.5898057330557721).epsilon(1e-10));
}

TEST_CASE("posterior closed-form cases") {
  const auto unit = Hyperparams::from_linear(1.0, 1.0, 0.0);
  const Dataset one = Dataset::make(rows({{0.0}}), vec({1.0}), false);
  const PosteriorSummary p = posterior(unit, one, rows({{1.0}}));
  CHECK(p.mean[0] == doctest::Approx(0.6065306597126334).epsilon(1e-14));
  CHECK(p.std[0] == doctest::Approx(0.7950600976206501).epsilon(1e-12));

  const Hyperparams noiseless = Hyperparams::from_linear(1.2, 0.3, 0.0);
  const Dataset d = reference_data();
  const PosteriorSummary at_train = posterior(noiseless, d, testing::reference_X());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    CHECK(at_train.mean[i] == doctest::Approx(testing::reference_y()[i]).epsilon(1e-6));
    CHECK(at_train.std[i] < 1e-4);
  }

  const PosteriorSummary far = posterior(testing::reference_hyper(), d, rows({{60.0, -40.0}}));
  CHECK(std::fabs(far.mean[0] - d.y_mean) < 1e-6);
  CHECK(std::fabs(far.std[0] - testing::reference_hyper().sigma()) < 1e-6);
}

TEST_CASE("posterior variance does not grow when data are added") {
  const Hyperparams h = testing::reference_hyper();
  const Matrix Xq = rows({{0.3, 0.3}, {0.7, 0.7}, {0.5, 0.1}, {0.05, 0.95}});
  Matrix X = testing::reference_X();
  const Vector y = testing::reference_y();
  Vector prev = posterior(h, Dataset::make(X.topRows(2), y.head(2)), Xq).variance();
  for (int n = 3; n <= 6; ++n) {
    const Vector cur = posterior(h, Dataset::make(X.topRows(n), y.head(n)), Xq).variance();
    CHECK((cur.array() <= prev.array() + 1e-12).all());
    prev = cur;
  }
}

TEST_CASE("derivative posterior") {
  const Dataset d = reference_data();
  const Hyperparams h = testing::reference_hyper();
  const PosteriorSummary p = derivative_posterior(h, d, rows({{0.3, 0.3}, {0.7, 0.7}, {0.5, 0.1}}), 1);
  CHECK(p.mean[0] == doctest::Approx(1.5983703595333187).epsilon(1e-10));
  CHECK(p.mean[1] == doctest::Approx(1.0576130221318212).epsilon(1e-10));
  CHECK(p.mean[2] == doctest::Approx(0.5575056029819228).epsilon(1e-10));
  CHECK(p.std[0] == doctest::Approx(1.2259465434139327).epsilon(1e-10));
  CHECK(p.std[1] == doctest::Approx(0.9185573249837355).epsilon(1e-10));
  CHECK(p.std[2] == doctest::Approx(1.9139241003224738).epsilon(1e-10));

  // Known slope: f(x) = x sampled at six points.
  Matrix X(6, 1);
  Vector y(6);
  for (int i = 0; i < 6; ++i) X(i, 0) = y[i] = i / 5.0;
  const Dataset line = Dataset::make(X, y);
  const Hyperparams hl = Hyperparams::from_linear(1.0, 1.0, 1e-4);
  const PosteriorSummary slope = derivative_posterior(hl, line, rows({{0.25}, {0.5}, {0.75}}), 0);
  for (int i = 0; i < 3; ++i) CHECK(std::fabs(slope.mean[i] - 1.0) < 0.1);

  const PosteriorSummary far = derivative_posterior(h, d, rows({{80.0, 80.0}}), 0);
  CHECK(std::fabs(far.mean[0]) < 1e-6);
  CHECK(std::fabs(far.std[0] - h.sigma() / h.length()) < 1e-6);

  // Finite differences of the value posterior mean.
  const Matrix Xq = rows({{0.45, 0.55}, {0.6, 0.35}});
  const PosteriorSummary dm = derivative_posterior(h, d, Xq, 0);
  for (Eigen::Index i = 0; i < Xq.rows(); ++i) {
    Matrix up = Xq.row(i), down = Xq.row(i);
    up(0, 0) += 1e-5;
    down(0, 0) -= 1e-5;
    const double fd = (posterior(h, d, up).mean[0] - posterior(h, d, down).mean[0]) / 2e-5;
    CHECK(std::fabs(fd - dm.mean[i]) < 1e-3);
  }
}

TEST_CASE("hyperprior") {
  const Hyperparams h{1.0, -2.0, 0.5};
  CHECK(hyperprior_neglog(h) == doctest::Approx((1.0 + 4.0 + 0.25) / 8.0));
  const Eigen::Vector3d g = hyperprior_grad(h);
  CHECK(g[1] == doctest::Approx(-0.5));
}
