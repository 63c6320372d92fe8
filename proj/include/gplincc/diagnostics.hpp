#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

#include "gplincc/posterior.hpp"
#include "gplincc/predictive.hpp"
#include "gplincc/types.hpp"

namespace gplincc {

// Mean squared error column by column; rows are evaluation points, columns
// components.
Eigen::VectorXd mse_per_component(const Eigen::MatrixXd& reference,
                                  const Eigen::MatrixXd& estimate);

// Pushforward of a coefficient Gaussian through the linear response at one
// input: outputs g theta with mean g theta_mean and covariance g cov g'.
GaussianDist model_output_predictive(const Eigen::MatrixXd& g, const Eigen::VectorXd& theta_mean,
                                     const Eigen::MatrixXd& theta_cov);

// Exact coefficient matrix g (n x p) at an arbitrary input point; the
// analytic benchmarks provide this.
using CoefficientFn = std::function<Eigen::MatrixXd(const Eigen::RowVectorXd&)>;

// Everything the held-out diagnostics need: the fitted design-side model plus
// a way to evaluate coefficients at new inputs.  Hyperparameters are reused
// as fitted on the full data; folds refit only the GLS summaries.
struct CalibrationSetup {
  Eigen::MatrixXd design;                   // m x q
  std::vector<Eigen::MatrixXd> g_at_design; // m blocks of n x p
  ObservationSet obs;
  HyperParams hyper;
  CoefficientFn coefficients;

  [[nodiscard]] int n() const { return obs.size(); }
  [[nodiscard]] int p() const { return hyper.p(); }
};

// Conditioning rebuilt with observation held_out removed (its row dropped
// from z, the noise, and every coefficient block); hyperparameters fixed.
GpPredictor loo_predictor(const CalibrationSetup& setup, int held_out);

// Scalar predictive of the model output g_lambda(x_i)' theta(lambda) at the
// held-out control point.
GaussianDist loo_output_predictive(const CalibrationSetup& setup, int held_out,
                                   const Eigen::RowVectorXd& lambda);

struct CoverageReport {
  double alpha = 0.05;
  int pairs = 0;
  std::uint64_t seed = 0;
  std::vector<int> x_index;   // held-out observation indices
  Eigen::VectorXd x_value;
  Eigen::VectorXd coverage;   // fraction of pairs whose interval contains 0
};

// Interchangeability check of the fitted coefficients across inputs: for
// each held-out observation i and each sampled input pair (l1, l2), the
// difference g_l1(x_i)' theta(l1) - g_l2(x_i)' theta(l2) is predicted from
// the data without observation i; the report records how often the level
// 1-alpha interval around it contains zero.  The same seeded pair sample is
// shared across all held-out indices, and indices are processed on the
// worker pool with one refit per index serving every pair.
CoverageReport compensation_coverage(const CalibrationSetup& setup, double alpha,
                                     const std::vector<int>& x_indices, int pairs,
                                     const LambdaDistribution& lambda_dist, std::uint64_t seed,
                                     int workers = 1);

// Upper quantile multiplier q_{1-alpha/2} of the standard normal.
double normal_quantile_two_sided(double alpha);

}  // namespace gplincc
