#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "gplincc/design.hpp"
#include "gplincc/kernel.hpp"
#include "gplincc/rng.hpp"

using namespace gplincc;

TEST_CASE("matern52 scalar values") {
  CHECK(matern52(0.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(matern52(0.0, 3.7, 0.2) == doctest::Approx(3.7).epsilon(1e-15));
  // frozen value of (1 + sqrt5 + 5/3) exp(-sqrt5), checked to 40 digits
  CHECK(std::abs(matern52(1.0, 1.0, 1.0) - 0.5239941088318203) < 1e-9);
  CHECK(matern52(1e6, 1.0, 1.0) < 1e-300);
}

TEST_CASE("matern52 rejects bad arguments") {
  CHECK_THROWS_AS(matern52(-0.1, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(matern52(std::nan(""), 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(matern52(1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(matern52(1.0, 1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(matern52(1.0, 1.0, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("matern52 is nonincreasing in distance") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const double sigma2 = rng.next_uniform(0.1, 5.0);
    const double psi = rng.next_uniform(0.1, 5.0);
    double prev = matern52(0.0, sigma2, psi);
    for (int i = 1; i <= 200; ++i) {
      const double cur = matern52(0.05 * i, sigma2, psi);
      CHECK(cur <= prev + 1e-15);
      prev = cur;
    }
  }
}

TEST_CASE("kernel_matrix basics") {
  ComponentKernel kernel{2.5, Eigen::VectorXd::Constant(1, 0.7)};
  const Eigen::MatrixXd one = Eigen::MatrixXd::Constant(1, 1, 0.3);
  CHECK(kernel_matrix(one, one, kernel)(0, 0) == doctest::Approx(2.5).epsilon(1e-15));

  Eigen::MatrixXd pts(4, 1);
  pts << 0.0, 0.4, 1.1, 3.0;
  const Eigen::MatrixXd k = kernel_matrix(pts, pts, kernel);
  CHECK((k - k.transpose()).norm() == 0.0);  // |a-b| makes entries exactly symmetric
  for (int i = 0; i < 4; ++i) CHECK(k(i, i) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("kernel_matrix tensorizes as a product of 1-D factors") {
  ComponentKernel kernel2{1.8, (Eigen::VectorXd(2) << 0.5, 2.0).finished()};
  Eigen::MatrixXd a(1, 2), b(1, 2);
  a << 0.2, 1.0;
  b << 0.9, 2.4;
  const double joint = kernel_matrix(a, b, kernel2)(0, 0);
  const double f1 = matern52(std::abs(0.2 - 0.9), 1.0, 0.5);
  const double f2 = matern52(std::abs(1.0 - 2.4), 1.0, 2.0);
  CHECK(joint == doctest::Approx(1.8 * f1 * f2).epsilon(1e-14));
}

TEST_CASE("kernel_matrix rejects dimension mismatch") {
  ComponentKernel kernel{1.0, Eigen::VectorXd::Ones(2)};
  CHECK_THROWS_AS(kernel_matrix(Eigen::MatrixXd::Zero(2, 1), Eigen::MatrixXd::Zero(2, 1), kernel),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernel_matrix(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 3), kernel),
                  std::invalid_argument);
}

namespace {

std::vector<ComponentKernel> two_kernels() {
  return {ComponentKernel{1.3, Eigen::VectorXd::Constant(1, 0.8)},
          ComponentKernel{0.6, Eigen::VectorXd::Constant(1, 2.5)}};
}

}  // namespace

TEST_CASE("build_prior_cov single component reduces to the kernel matrix") {
  Eigen::MatrixXd design(3, 1);
  design << 0.1, 0.9, 2.2;
  ComponentKernel kernel{2.0, Eigen::VectorXd::Constant(1, 1.1)};
  const PriorCovariance prior = build_prior_cov(design, {kernel});
  const Eigen::MatrixXd expected =
      kernel_matrix(design, design, kernel) +
      prior.jitter_scale * 2.0 * Eigen::MatrixXd::Identity(3, 3);
  CHECK((prior.cov - expected).norm() < 1e-14);
  CHECK(prior.jitter_scale == doctest::Approx(1e-8));
}

TEST_CASE("build_prior_cov single point is diagonal in the component variances") {
  const Eigen::MatrixXd design = Eigen::MatrixXd::Constant(1, 1, 0.5);
  const PriorCovariance prior = build_prior_cov(design, two_kernels());
  CHECK(prior.cov(0, 0) == doctest::Approx(1.3 * (1.0 + prior.jitter_scale)).epsilon(1e-12));
  CHECK(prior.cov(1, 1) == doctest::Approx(0.6 * (1.0 + prior.jitter_scale)).epsilon(1e-12));
  CHECK(prior.cov(0, 1) == 0.0);
  CHECK(prior.cov(1, 0) == 0.0);
}

TEST_CASE("build_prior_cov permutes to one dense block per component") {
  Eigen::MatrixXd design(2, 1);
  design << 0.2, 1.4;
  const auto kernels = two_kernels();
  const PriorCovariance prior = build_prior_cov(design, kernels);
  const StackLayout layout{2, 2};
  const Eigen::VectorXi order = layout.component_major_order();
  Eigen::MatrixXd permuted(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) permuted(r, c) = prior.cov(order[r], order[c]);
  for (int u = 0; u < 2; ++u) {
    const Eigen::MatrixXd block =
        kernel_matrix(design, design, kernels[u]) +
        prior.jitter_scale * kernels[u].variance * Eigen::MatrixXd::Identity(2, 2);
    CHECK((permuted.block(2 * u, 2 * u, 2, 2) - block).norm() < 1e-14);
  }
  CHECK(permuted.block(0, 2, 2, 2).norm() == 0.0);
  CHECK(permuted.block(2, 0, 2, 2).norm() == 0.0);
}

TEST_CASE("build_prior_cov output is symmetric positive definite") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_below(19));
    const DesignSet design = lhs_uniform(m, LambdaDistribution::uniform(0.0, 1.0), rng.next_u64());
    std::vector<ComponentKernel> kernels;
    const int p = 1 + static_cast<int>(rng.next_below(2));
    for (int u = 0; u < p; ++u)
      kernels.push_back(ComponentKernel{rng.next_uniform(0.2, 3.0),
                                        Eigen::VectorXd::Constant(1, rng.next_uniform(0.1, 2.0))});
    const PriorCovariance prior = build_prior_cov(design.points, kernels);
    CHECK((prior.cov - prior.cov.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(prior.cov);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("build_prior_cov escalates jitter on duplicated points") {
  Eigen::MatrixXd design(3, 1);
  design << 0.5, 0.5, 1.0;  // exact duplicate row makes the kernel singular
  ComponentKernel kernel{1.0, Eigen::VectorXd::Constant(1, 1.0)};
  const PriorCovariance prior = build_prior_cov(design, {kernel});
  CHECK(prior.jitter_scale >= 1e-8);
  CHECK(Eigen::LLT<Eigen::MatrixXd>(prior.cov).info() == Eigen::Success);
}

TEST_CASE("cross_cov at the design equals the prior without jitter") {
  Eigen::MatrixXd design(3, 1);
  design << 0.0, 0.7, 1.9;
  const auto kernels = two_kernels();
  const PriorCovariance prior = build_prior_cov(design, kernels);
  const Eigen::MatrixXd cross = cross_cov(design, design, kernels);
  Eigen::MatrixXd jitter = Eigen::MatrixXd::Zero(6, 6);
  const StackLayout layout{2, 3};
  for (int j = 0; j < 3; ++j)
    for (int u = 0; u < 2; ++u)
      jitter(layout.index(j, u), layout.index(j, u)) =
          prior.jitter_scale * kernels[u].variance;
  CHECK((prior.cov - cross - jitter).norm() < 1e-14);
}

TEST_CASE("cross_cov decays at far points") {
  Eigen::MatrixXd design(2, 1);
  design << 0.0, 1.0;
  const auto kernels = two_kernels();
  const Eigen::MatrixXd far = Eigen::MatrixXd::Constant(1, 1, 500.0);
  const Eigen::MatrixXd cross = cross_cov(far, design, kernels);
  CHECK(cross.cwiseAbs().maxCoeff() < 1e-12 * 1.3);
}

TEST_CASE("stack layout round-trips between orderings") {
  const StackLayout layout{3, 4};
  const Eigen::VectorXi order = layout.component_major_order();
  CHECK(order.size() == 12);
  Eigen::VectorXi seen = Eigen::VectorXi::Zero(12);
  for (int i = 0; i < 12; ++i) seen[order[i]] += 1;
  CHECK(seen.minCoeff() == 1);  // a permutation: every index exactly once
  CHECK(order[0] == layout.index(0, 0));
  CHECK(order[1] == layout.index(1, 0));
  CHECK(order[4] == layout.index(0, 1));
}
