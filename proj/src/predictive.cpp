#include "gplincc/predictive.hpp"

#include <cmath>

#include "gplincc/parallel.hpp"

namespace gplincc {

namespace {

void check_points(const Eigen::MatrixXd& lambda_star, const Eigen::MatrixXd& design) {
  if (lambda_star.rows() == 0) throw std::invalid_argument("predict: empty point set");
  if (lambda_star.cols() != design.cols())
    throw std::invalid_argument("predict: point dimension disagrees with design");
}

}  // namespace

PredictiveTheta predict(const Eigen::MatrixXd& lambda_star, const GaussianDist& posterior,
                        const PriorModel& prior, const Eigen::MatrixXd& design,
                        const HyperParams& hyper) {
  check_points(lambda_star, design);
  Eigen::LLT<Eigen::MatrixXd> k_llt(prior.cov);
  if (k_llt.info() != Eigen::Success)
    throw NumericError("predict: prior covariance factorization failed");

  const Eigen::MatrixXd c = cross_cov(lambda_star, design, hyper.kernels);
  const Eigen::MatrixXd w = k_llt.solve(c.transpose());  // K^-1 C'
  const Eigen::MatrixXd c_star = cross_cov(lambda_star, lambda_star, hyper.kernels);

  PredictiveTheta out;
  out.points = lambda_star;
  out.mean = hyper.trend().mean_stack(static_cast<int>(lambda_star.rows())) +
             w.transpose() * (posterior.mean - prior.mean);
  out.cov = c_star - c * w + w.transpose() * posterior.cov * w;
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

GpPredictor::GpPredictor(Eigen::MatrixXd design, HyperParams hyper,
                         const CalibrationMatrices& calib)
    : design_(std::move(design)), hyper_(std::move(hyper)) {
  prior_ = build_prior(design_, hyper_);
  if (calib.gls_stack.size() != prior_.mean.size())
    throw std::invalid_argument("GpPredictor: calibration/design sizes disagree");
  delta_block_ = calib.delta_block;
  s_llt_.compute(delta_block_ + prior_.cov);
  if (s_llt_.info() != Eigen::Success)
    throw NumericError("GpPredictor: Delta + K factorization failed");
  resid_ = calib.gls_stack - prior_.mean;
  alpha_ = s_llt_.solve(resid_);
}

PredictiveTheta GpPredictor::predict(const Eigen::MatrixXd& lambda_star) const {
  check_points(lambda_star, design_);
  const Eigen::MatrixXd c = cross_cov(lambda_star, design_, hyper_.kernels);
  PredictiveTheta out;
  out.points = lambda_star;
  out.mean = hyper_.trend().mean_stack(static_cast<int>(lambda_star.rows())) + c * alpha_;
  out.cov = cross_cov(lambda_star, lambda_star, hyper_.kernels) -
            c * s_llt_.solve(c.transpose());
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

MarginalPrediction GpPredictor::predict_marginal(const Eigen::MatrixXd& lambda_star, int chunk,
                                                 int workers) const {
  check_points(lambda_star, design_);
  if (chunk <= 0) throw std::invalid_argument("predict_marginal: chunk must be positive");
  const int k = static_cast<int>(lambda_star.rows());
  const int p = hyper_.p();

  MarginalPrediction out;
  out.points = lambda_star;
  out.mean.resize(static_cast<Eigen::Index>(p) * k);
  out.block_cov.assign(k, Eigen::MatrixXd());

  const int n_chunks = (k + chunk - 1) / chunk;
  parallel_for(n_chunks, workers, [&](int ci) {
    const int lo = ci * chunk;
    const int len = std::min(chunk, k - lo);
    const Eigen::MatrixXd pts = lambda_star.middleRows(lo, len);
    const Eigen::MatrixXd c = cross_cov(pts, design_, hyper_.kernels);
    const Eigen::MatrixXd v = s_llt_.solve(c.transpose());
    const Eigen::VectorXd mean =
        hyper_.trend().mean_stack(len) + c * alpha_;
    out.mean.segment(static_cast<Eigen::Index>(p) * lo, static_cast<Eigen::Index>(p) * len) =
        mean;
    for (int i = 0; i < len; ++i) {
      const Eigen::MatrixXd self =
          cross_cov(pts.row(i), pts.row(i), hyper_.kernels);
      Eigen::MatrixXd block =
          self - c.middleRows(i * p, p) * v.middleCols(i * p, p);
      out.block_cov[lo + i] = 0.5 * (block + block.transpose());
    }
  });
  return out;
}

GaussianDist GpPredictor::posterior() const {
  GaussianDist post;
  post.mean = prior_.mean + prior_.cov * alpha_;
  post.cov = prior_.cov - prior_.cov * s_llt_.solve(prior_.cov);
  post.cov = 0.5 * (post.cov + post.cov.transpose()).eval();
  return post;
}

GaussianDist target_jeffreys(const Eigen::MatrixXd& lambda_star,
                             const std::vector<Eigen::MatrixXd>& g_blocks,
                             const ObservationSet& obs) {
  const int k = static_cast<int>(lambda_star.rows());
  if (k == 0 || g_blocks.size() != static_cast<std::size_t>(k))
    throw std::invalid_argument("target_jeffreys: one coefficient block per point required");
  const CalibrationMatrices calib = assemble_calibration_matrices(g_blocks, obs);
  return GaussianDist{calib.gls_stack, calib.delta_block};
}

GaussianDist target_gp(const Eigen::MatrixXd& lambda_star,
                       const std::vector<Eigen::MatrixXd>& g_blocks, const ObservationSet& obs,
                       const HyperParams& hyper) {
  const int k = static_cast<int>(lambda_star.rows());
  if (k == 0 || g_blocks.size() != static_cast<std::size_t>(k))
    throw std::invalid_argument("target_gp: one coefficient block per point required");
  const CalibrationMatrices calib = assemble_calibration_matrices(g_blocks, obs);
  return posterior_theta(calib, build_prior(lambda_star, hyper));
}

}  // namespace gplincc
