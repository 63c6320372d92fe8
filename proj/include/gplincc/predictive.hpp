#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <vector>

#include "gplincc/linearize.hpp"
#include "gplincc/posterior.hpp"
#include "gplincc/types.hpp"

namespace gplincc {

// Joint Gaussian of the stacked coefficients at k new points (point-major).
struct PredictiveTheta {
  Eigen::MatrixXd points;  // k x q
  Eigen::VectorXd mean;    // pk
  Eigen::MatrixXd cov;     // pk x pk
};

// Means plus per-point covariance blocks only; what large-k pipelines need.
struct MarginalPrediction {
  Eigen::MatrixXd points;                    // k x q
  Eigen::VectorXd mean;                      // pk
  std::vector<Eigen::MatrixXd> block_cov;    // k blocks of p x p
};

// Predictive distribution at new points from the conditional distribution at
// the design:
//   mean = m_beta(l*) + C K^-1 (post.mean - M)
//   cov  = C(l*,l*) - C K^-1 C(D,l*) + C K^-1 post.cov K^-1 C'
// with C = cross_cov(l*, D) and every K^-1 applied through one Cholesky
// factorization of the jittered prior covariance.
PredictiveTheta predict(const Eigen::MatrixXd& lambda_star, const GaussianDist& posterior,
                        const PriorModel& prior, const Eigen::MatrixXd& design,
                        const HyperParams& hyper);

// Fused conditioning + prediction engine.  Substituting the shifted-form
// conditional into the formulas above collapses them to
//   mean = m_beta(l*) + C (Delta + K)^-1 (theta_gls - M)
//   cov  = C(l*,l*) - C (Delta + K)^-1 C'
// (the K^-1 factors cancel exactly), so one factorization of Delta + K
// serves the conditional distribution and every later prediction.
class GpPredictor {
 public:
  GpPredictor(Eigen::MatrixXd design, HyperParams hyper, const CalibrationMatrices& calib);

  [[nodiscard]] PredictiveTheta predict(const Eigen::MatrixXd& lambda_star) const;

  // Chunked evaluation (default 256 points per chunk) of means and per-point
  // covariance blocks; chunks run on the worker pool and write disjoint
  // slots, so the result does not depend on scheduling.
  [[nodiscard]] MarginalPrediction predict_marginal(const Eigen::MatrixXd& lambda_star,
                                                    int chunk = 256, int workers = 1) const;

  [[nodiscard]] GaussianDist posterior() const;
  [[nodiscard]] const PriorModel& prior() const { return prior_; }
  [[nodiscard]] const Eigen::MatrixXd& design() const { return design_; }
  [[nodiscard]] const HyperParams& hyper() const { return hyper_; }

 private:
  Eigen::MatrixXd design_;
  HyperParams hyper_;
  PriorModel prior_;
  Eigen::MatrixXd delta_block_;
  Eigen::LLT<Eigen::MatrixXd> s_llt_;  // Delta + K
  Eigen::VectorXd resid_;              // theta_gls - M
  Eigen::VectorXd alpha_;              // (Delta + K)^-1 resid
};

// Reference distribution without any smoothing across points: independent
// per-point GLS Gaussians N((g'S^-1 g)^-1 g'S^-1 z, (g'S^-1 g)^-1), stacked
// block-diagonally.  This is the no-prior limit of the conditional update.
GaussianDist target_jeffreys(const Eigen::MatrixXd& lambda_star,
                             const std::vector<Eigen::MatrixXd>& g_blocks,
                             const ObservationSet& obs);

// Reference distribution with a Gaussian prior at the evaluation points
// themselves: the conditional update run with the design replaced by
// lambda_star under the supplied hyperparameters.
GaussianDist target_gp(const Eigen::MatrixXd& lambda_star,
                       const std::vector<Eigen::MatrixXd>& g_blocks, const ObservationSet& obs,
                       const HyperParams& hyper);

}  // namespace gplincc
