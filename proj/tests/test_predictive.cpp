#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "gplincc/benchmarks.hpp"
#include "gplincc/design.hpp"
#include "gplincc/hyperfit.hpp"
#include "gplincc/linearize.hpp"
#include "gplincc/predictive.hpp"
#include "gplincc/rng.hpp"
#include "oracles.hpp"

using namespace gplincc;

namespace {

struct Workbench {
  test::RandomInstance inst;
  PriorModel prior;
  CalibrationMatrices calib;
  GaussianDist post;
};

Workbench make_workbench(std::uint64_t seed) {
  Workbench w;
  w.inst = test::make_random_instance(seed);
  w.prior = build_prior(w.inst.design, w.inst.hyper);
  w.calib = assemble_calibration_matrices(w.inst.g_blocks, w.inst.obs);
  w.post = posterior_theta(w.calib, w.prior);
  return w;
}

Eigen::MatrixXd probe_points(const Eigen::MatrixXd& design, int k, SplitMix64& rng) {
  const double lo = design.minCoeff() - 0.5;
  const double hi = design.maxCoeff() + 0.5;
  Eigen::MatrixXd pts(k, design.cols());
  for (int i = 0; i < k; ++i)
    for (int d = 0; d < design.cols(); ++d) pts(i, d) = rng.next_uniform(lo, hi);
  return pts;
}

}  // namespace

TEST_CASE("prediction at the design reproduces the conditional distribution") {
  SplitMix64 rng(1001);
  for (int trial = 0; trial < 10; ++trial) {
    const Workbench w = make_workbench(rng.next_u64());
    const PredictiveTheta at_design =
        predict(w.inst.design, w.post, w.prior, w.inst.design, w.inst.hyper);
    // at the design C equals the jittered prior itself, so the smoother is the
    // identity up to the jitter magnitude
    const double slack = 1e-5 * (1.0 + w.post.mean.norm());
    CHECK((at_design.mean - w.post.mean).norm() <= slack);
    CHECK((at_design.cov - w.post.cov).norm() <= 1e-4 * (1.0 + w.post.cov.norm()));
  }
}

TEST_CASE("two-stage and fused prediction routes agree") {
  SplitMix64 rng(2002);
  for (int trial = 0; trial < 12; ++trial) {
    const Workbench w = make_workbench(rng.next_u64());
    const GpPredictor engine(w.inst.design, w.inst.hyper, w.calib);
    Eigen::MatrixXd pts = probe_points(w.inst.design, 7, rng);
    const PredictiveTheta staged = predict(pts, w.post, w.prior, w.inst.design, w.inst.hyper);
    const PredictiveTheta fused = engine.predict(pts);
    CHECK((staged.mean - fused.mean).norm() <= 1e-8 * (1.0 + fused.mean.norm()));
    CHECK((staged.cov - fused.cov).norm() <= 1e-8 * (1.0 + fused.cov.norm()));
    const GaussianDist engine_post = engine.posterior();
    CHECK((engine_post.mean - w.post.mean).norm() <= 1e-10 * (1.0 + w.post.mean.norm()));
    CHECK((engine_post.cov - w.post.cov).norm() <= 1e-10 * (1.0 + w.post.cov.norm()));
  }
}

TEST_CASE("marginal blocks match the joint diagonal for any chunking") {
  SplitMix64 rng(3003);
  const Workbench w = make_workbench(rng.next_u64());
  const GpPredictor engine(w.inst.design, w.inst.hyper, w.calib);
  const Eigen::MatrixXd pts = probe_points(w.inst.design, 23, rng);
  const PredictiveTheta joint = engine.predict(pts);
  const int p = w.inst.p;
  for (const int chunk : {1, 4, 256}) {
    for (const int workers : {1, 3}) {
      const MarginalPrediction marg = engine.predict_marginal(pts, chunk, workers);
      CHECK((marg.mean - joint.mean).norm() <= 1e-12 * (1.0 + joint.mean.norm()));
      REQUIRE(static_cast<int>(marg.block_cov.size()) == 23);
      for (int i = 0; i < 23; ++i) {
        const Eigen::MatrixXd block = joint.cov.block(i * p, i * p, p, p);
        CHECK((marg.block_cov[i] - block).norm() <= 1e-12 * (1.0 + block.norm()));
      }
    }
  }
}

TEST_CASE("predictive covariance is symmetric positive semidefinite") {
  SplitMix64 rng(4004);
  for (int trial = 0; trial < 8; ++trial) {
    const Workbench w = make_workbench(rng.next_u64());
    const GpPredictor engine(w.inst.design, w.inst.hyper, w.calib);
    const Eigen::MatrixXd pts = probe_points(w.inst.design, 9, rng);
    const PredictiveTheta pred = engine.predict(pts);
    CHECK((pred.cov - pred.cov.transpose()).norm() <= 1e-12 * (1.0 + pred.cov.norm()));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(pred.cov);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-8 * (1.0 + pred.cov.norm()));
  }
}

TEST_CASE("far from the design the prediction reverts to the prior") {
  SplitMix64 rng(5005);
  const Workbench w = make_workbench(rng.next_u64());
  const GpPredictor engine(w.inst.design, w.inst.hyper, w.calib);
  Eigen::MatrixXd far(1, w.inst.design.cols());
  far.setConstant(w.inst.design.maxCoeff() + 1e4);
  const PredictiveTheta pred = engine.predict(far);
  const int p = w.inst.p;
  const Eigen::VectorXd trend = w.inst.hyper.trend().mean_stack(1);
  CHECK((pred.mean - trend).norm() <= 1e-8 * (1.0 + trend.norm()));
  Eigen::MatrixXd prior_var = Eigen::MatrixXd::Zero(p, p);
  for (int u = 0; u < p; ++u) prior_var(u, u) = w.inst.hyper.kernels[u].variance;
  CHECK((pred.cov - prior_var).norm() <= 1e-8 * (1.0 + prior_var.norm()));
}

TEST_CASE("no-smoothing reference equals independent per-point estimation") {
  SplitMix64 rng(6006);
  const auto inst = test::make_random_instance(rng.next_u64(), 2, 3, 5);
  const GaussianDist ref = target_jeffreys(inst.design, inst.g_blocks, inst.obs);
  const CalibrationMatrices calib = assemble_calibration_matrices(inst.g_blocks, inst.obs);
  CHECK((ref.mean - calib.gls_stack).norm() <= 1e-13 * (1.0 + calib.gls_stack.norm()));
  CHECK((ref.cov - calib.delta_block).norm() <= 1e-13 * (1.0 + calib.delta_block.norm()));
  // off-diagonal blocks vanish: points are estimated independently
  const int p = inst.p;
  for (int a = 0; a < inst.m; ++a)
    for (int b = 0; b < inst.m; ++b)
      if (a != b) CHECK(ref.cov.block(a * p, b * p, p, p).norm() == 0.0);
}

TEST_CASE("scalar closed form for the smoothed reference") {
  // single point, p = 1: with per-point variance t = Delta and prior variance
  // s2 the reference update gives var = t s2 / (t + s2) and pulls the mean
  // toward beta by the same shrinkage factor
  const double lambda = 2.0;
  const int n = 4;
  ObservationSet obs;
  obs.x = Eigen::VectorXd::LinSpaced(n, 0, 1);
  obs.z = (Eigen::VectorXd(n) << 9.0, 11.0, 10.5, 9.5).finished();
  obs.noise_var = Eigen::VectorXd::Constant(n, 2.0);
  const std::vector<Eigen::MatrixXd> g = {Eigen::MatrixXd::Constant(n, 1, lambda)};
  const Eigen::MatrixXd pts = Eigen::MatrixXd::Constant(1, 1, lambda);

  const double t = 2.0 / (n * lambda * lambda);
  const double theta_hat = obs.z.mean() / lambda;
  const double s2 = 0.7, beta = 1.0;
  HyperParams hyper;
  hyper.beta = Eigen::VectorXd::Constant(1, beta);
  hyper.kernels = {ComponentKernel{s2, Eigen::VectorXd::Ones(1)}};

  const GaussianDist ref = target_gp(pts, g, obs, hyper);
  const double shrink = s2 / (s2 + t);
  CHECK(ref.mean[0] == doctest::Approx(beta + shrink * (theta_hat - beta)).epsilon(1e-6));
  CHECK(ref.cov(0, 0) == doctest::Approx(t * shrink).epsilon(1e-6));
}

TEST_CASE("smoothed reference approaches the no-smoothing one as the prior widens") {
  SplitMix64 rng(7007);
  auto inst = test::make_random_instance(rng.next_u64());
  const GaussianDist flat = target_jeffreys(inst.design, inst.g_blocks, inst.obs);
  for (auto& kernel : inst.hyper.kernels) {
    kernel.variance = 1e9;
    kernel.lengthscales.setConstant(1e-4);  // decorrelate the points as well
  }
  const GaussianDist wide = target_gp(inst.design, inst.g_blocks, inst.obs, inst.hyper);
  CHECK((wide.mean - flat.mean).norm() <= 1e-5 * (1.0 + flat.mean.norm()));
  for (int a = 0; a < inst.m; ++a) {
    const int p = inst.p;
    const Eigen::MatrixXd wb = wide.cov.block(a * p, a * p, p, p);
    const Eigen::MatrixXd fb = flat.cov.block(a * p, a * p, p, p);
    CHECK((wb - fb).norm() <= 1e-5 * (1.0 + fb.norm()));
  }
}

TEST_CASE("model-space check on the inverse-scaling benchmark") {
  // z = 5 + noise observed through g = lambda, so theta(l) = 5/l; with
  // fitted scales the predictive mean through the observation operator sits
  // near 5 across the whole range
  const int m = 12, n = 40;
  const Benchmark bench = make_example1(n, 8008);
  SplitMix64 rng(8009);
  const Eigen::MatrixXd design = sample_iid(m, bench.lambda_dist, rng);
  const std::vector<Eigen::MatrixXd> g_blocks = bench.coefficients_at(design);

  const CalibrationMatrices calib = assemble_calibration_matrices(g_blocks, bench.obs);
  OptimizerConfig cfg;
  cfg.seed = 8010;
  const HyperParams hyper = fit_hyperparameters(make_marginal_data(design, calib), cfg).hyper;
  const GpPredictor engine(design, hyper, calib);

  const Eigen::MatrixXd grid =
      Eigen::VectorXd::LinSpaced(25, bench.lambda_dist.lower[0], bench.lambda_dist.upper[0]);
  const PredictiveTheta pred = engine.predict(grid);
  for (int i = 0; i < grid.rows(); ++i) {
    const double predicted_z = grid(i, 0) * pred.mean[i];
    CHECK(std::abs(predicted_z - 5.0) < 1.0);
  }
}
