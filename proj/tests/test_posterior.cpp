#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "gplincc/linearize.hpp"
#include "gplincc/posterior.hpp"
#include "gplincc/rng.hpp"
#include "oracles.hpp"

using namespace gplincc;

namespace {

GaussianDist stable_posterior(const test::RandomInstance& inst, const PriorModel& prior) {
  const CalibrationMatrices calib = assemble_calibration_matrices(inst.g_blocks, inst.obs);
  return posterior_theta(calib, prior);
}

}  // namespace

TEST_CASE("scalar conjugate update by hand") {
  // one point, one component, unit noise and unit prior variance, z = 2:
  // the update averages data and prior into N(1, 1/2)
  test::RandomInstance inst;
  inst.p = inst.m = inst.n = 1;
  inst.design = Eigen::MatrixXd::Zero(1, 1);
  inst.g_blocks = {Eigen::MatrixXd::Ones(1, 1)};
  inst.obs.x = Eigen::VectorXd::Zero(1);
  inst.obs.z = Eigen::VectorXd::Constant(1, 2.0);
  inst.obs.noise_var = Eigen::VectorXd::Ones(1);
  inst.hyper.beta = Eigen::VectorXd::Zero(1);
  inst.hyper.kernels = {ComponentKernel{1.0, Eigen::VectorXd::Ones(1)}};

  const PriorModel prior = build_prior(inst.design, inst.hyper);
  const GaussianDist post = stable_posterior(inst, prior);
  CHECK(post.mean[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(post.cov(0, 0) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("stable form agrees with the explicit-inverse form") {
  SplitMix64 rng(90210);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = test::make_random_instance(rng.next_u64());
    const PriorModel prior = build_prior(inst.design, inst.hyper);
    const GaussianDist stable = stable_posterior(inst, prior);
    const GaussianDist literal = test::posterior_literal(inst, prior);
    CHECK((stable.mean - literal.mean).norm() <= 1e-8 * (1.0 + literal.mean.norm()));
    CHECK((stable.cov - literal.cov).norm() <= 1e-8 * (1.0 + literal.cov.norm()));
  }
}

TEST_CASE("posterior matches normalized grid integration in low dimension") {
  SplitMix64 rng(777);
  int checked = 0;
  for (int trial = 0; trial < 6; ++trial) {
    // alternate between (p<=1, m<=2) and (p<=2, m=1) so the stacked
    // dimension stays within reach of the dense grid
    const auto inst = (trial % 2 == 0) ? test::make_random_instance(rng.next_u64(), 1, 2, 4)
                                       : test::make_random_instance(rng.next_u64(), 2, 1, 4);
    const PriorModel prior = build_prior(inst.design, inst.hyper);
    const GaussianDist fast = stable_posterior(inst, prior);
    const GaussianDist grid = test::posterior_grid(inst, prior);
    CHECK((fast.mean - grid.mean).norm() <= 1e-3 * (1.0 + grid.mean.norm()));
    CHECK((fast.cov - grid.cov).norm() <= 1e-3 * (1.0 + grid.cov.norm()));
    ++checked;
  }
  CHECK(checked == 6);
}

TEST_CASE("huge noise returns the prior") {
  SplitMix64 rng(5150);
  auto inst = test::make_random_instance(rng.next_u64());
  inst.obs.noise_var *= 1e10;
  const PriorModel prior = build_prior(inst.design, inst.hyper);
  const GaussianDist post = stable_posterior(inst, prior);
  CHECK((post.mean - prior.mean).norm() <= 1e-6 * (1.0 + prior.mean.norm()));
  CHECK((post.cov - prior.cov).norm() <= 1e-6 * prior.cov.norm());
}

TEST_CASE("huge prior variance returns the per-point estimates") {
  SplitMix64 rng(6021);
  auto inst = test::make_random_instance(rng.next_u64());
  for (auto& kernel : inst.hyper.kernels) kernel.variance *= 1e8;
  const PriorModel prior = build_prior(inst.design, inst.hyper);
  const CalibrationMatrices calib = assemble_calibration_matrices(inst.g_blocks, inst.obs);
  const GaussianDist post = posterior_theta(calib, prior);
  CHECK((post.mean - calib.gls_stack).norm() <= 1e-5 * (1.0 + calib.gls_stack.norm()));
  CHECK((post.cov - calib.delta_block).norm() <= 1e-5 * calib.delta_block.norm());
}

TEST_CASE("conditioning never inflates the prior covariance") {
  SplitMix64 rng(424242);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = test::make_random_instance(rng.next_u64());
    const PriorModel prior = build_prior(inst.design, inst.hyper);
    const GaussianDist post = stable_posterior(inst, prior);
    CHECK((post.cov - post.cov.transpose()).norm() <= 1e-14 * (1.0 + post.cov.norm()));
    const Eigen::MatrixXd gap = prior.cov - post.cov;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gap);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-9 * (1.0 + prior.cov.norm()));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> post_eig(post.cov);
    CHECK(post_eig.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("constant trend basis") {
  const TrendModel trend{(Eigen::VectorXd(2) << 1.5, -2.0).finished()};
  const Eigen::MatrixXd h = trend.basis(3);
  REQUIRE(h.rows() == 6);
  REQUIRE(h.cols() == 2);
  CHECK(h.colwise().sum().isApproxToConstant(3.0));
  CHECK((h * trend.beta - trend.mean_stack(3)).norm() == 0.0);
  const StackLayout layout{2, 3};
  for (int j = 0; j < 3; ++j)
    for (int u = 0; u < 2; ++u) {
      CHECK(h(layout.index(j, u), u) == 1.0);
      CHECK(h.row(layout.index(j, u)).sum() == 1.0);
    }
}

TEST_CASE("hyperparameter container validation") {
  HyperParams hyper;
  hyper.beta = Eigen::VectorXd::Zero(2);
  hyper.kernels = {ComponentKernel{1.0, Eigen::VectorXd::Ones(1)}};
  CHECK_THROWS_AS(hyper.validate(), std::invalid_argument);
  hyper.kernels.push_back(ComponentKernel{2.0, Eigen::VectorXd::Ones(1)});
  CHECK_NOTHROW(hyper.validate());
}
