#include "gplincc/posterior.hpp"

#include <Eigen/Cholesky>

namespace gplincc {

PriorModel build_prior(const Eigen::MatrixXd& design, const HyperParams& hyper) {
  hyper.validate();
  const int m = static_cast<int>(design.rows());
  if (m == 0) throw std::invalid_argument("build_prior: empty design");
  PriorCovariance prior_cov = build_prior_cov(design, hyper.kernels);
  return PriorModel{hyper.trend().mean_stack(m), std::move(prior_cov.cov),
                    prior_cov.jitter_scale};
}

GaussianDist posterior_theta(const CalibrationMatrices& calib, const PriorModel& prior) {
  const int dim = static_cast<int>(prior.mean.size());
  if (calib.layout.m == 0) throw std::invalid_argument("posterior_theta: empty design");
  if (calib.gls_stack.size() != dim || calib.delta_block.rows() != dim)
    throw std::invalid_argument("posterior_theta: calibration/prior sizes disagree");

  Eigen::MatrixXd s = calib.delta_block + prior.cov;
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success)
    throw NumericError("posterior_theta: Delta + K factorization failed");

  const Eigen::VectorXd resid = calib.gls_stack - prior.mean;
  GaussianDist post;
  post.mean = prior.mean + prior.cov * llt.solve(resid);
  const Eigen::MatrixXd ks = llt.solve(prior.cov);  // (Delta + K)^-1 K
  post.cov = prior.cov - prior.cov * ks;
  post.cov = 0.5 * (post.cov + post.cov.transpose()).eval();
  return post;
}

}  // namespace gplincc
