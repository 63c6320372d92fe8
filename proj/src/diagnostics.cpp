#include "gplincc/diagnostics.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>

#include "gplincc/design.hpp"
#include "gplincc/parallel.hpp"
#include "gplincc/rng.hpp"

namespace gplincc {

Eigen::VectorXd mse_per_component(const Eigen::MatrixXd& reference,
                                  const Eigen::MatrixXd& estimate) {
  if (reference.rows() == 0 || reference.rows() != estimate.rows() ||
      reference.cols() != estimate.cols())
    throw std::invalid_argument("mse_per_component: shapes disagree");
  return (reference - estimate).array().square().colwise().mean().transpose();
}

GaussianDist model_output_predictive(const Eigen::MatrixXd& g, const Eigen::VectorXd& theta_mean,
                                     const Eigen::MatrixXd& theta_cov) {
  if (g.cols() != theta_mean.size() || theta_cov.rows() != theta_mean.size() ||
      theta_cov.cols() != theta_mean.size())
    throw std::invalid_argument("model_output_predictive: shapes disagree");
  GaussianDist out;
  out.mean = g * theta_mean;
  out.cov = g * theta_cov * g.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

namespace {

std::vector<Eigen::MatrixXd> drop_row(const std::vector<Eigen::MatrixXd>& blocks, int row) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(blocks.size());
  for (const auto& block : blocks) {
    Eigen::MatrixXd reduced(block.rows() - 1, block.cols());
    reduced.topRows(row) = block.topRows(row);
    reduced.bottomRows(block.rows() - 1 - row) = block.bottomRows(block.rows() - 1 - row);
    out.push_back(std::move(reduced));
  }
  return out;
}

}  // namespace

GpPredictor loo_predictor(const CalibrationSetup& setup, int held_out) {
  if (setup.n() < 2)
    throw std::invalid_argument("loo_predictor: need at least two observations");
  if (held_out < 0 || held_out >= setup.n())
    throw std::invalid_argument("loo_predictor: index out of range");
  const CalibrationMatrices calib = assemble_calibration_matrices(
      drop_row(setup.g_at_design, held_out), setup.obs.without(held_out));
  return GpPredictor(setup.design, setup.hyper, calib);
}

GaussianDist loo_output_predictive(const CalibrationSetup& setup, int held_out,
                                   const Eigen::RowVectorXd& lambda) {
  const GpPredictor fold = loo_predictor(setup, held_out);
  const PredictiveTheta pred = fold.predict(lambda);
  const Eigen::MatrixXd g_row = setup.coefficients(lambda).row(held_out);
  return model_output_predictive(g_row, pred.mean, pred.cov);
}

double normal_quantile_two_sided(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("normal_quantile_two_sided: alpha must lie in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - alpha / 2.0);
}

CoverageReport compensation_coverage(const CalibrationSetup& setup, double alpha,
                                     const std::vector<int>& x_indices, int pairs,
                                     const LambdaDistribution& lambda_dist, std::uint64_t seed,
                                     int workers) {
  if (pairs <= 0) throw std::invalid_argument("compensation_coverage: pairs must be positive");
  if (x_indices.empty())
    throw std::invalid_argument("compensation_coverage: no held-out indices");
  const double quantile = normal_quantile_two_sided(alpha);
  const int p = setup.p();

  // One shared pair sample, drawn as 2q-dimensional rows.
  SplitMix64 rng(seed);
  const Eigen::MatrixXd lambda1 = sample_iid(pairs, lambda_dist, rng);
  const Eigen::MatrixXd lambda2 = sample_iid(pairs, lambda_dist, rng);

  CoverageReport report;
  report.alpha = alpha;
  report.pairs = pairs;
  report.seed = seed;
  report.x_index = x_indices;
  report.x_value.resize(static_cast<Eigen::Index>(x_indices.size()));
  report.coverage.resize(static_cast<Eigen::Index>(x_indices.size()));

  parallel_for(static_cast<int>(x_indices.size()), workers, [&](int slot) {
    const int i = x_indices[slot];
    const GpPredictor fold = loo_predictor(setup, i);
    int covered = 0;
    Eigen::MatrixXd pair_points(2, lambda_dist.dim());
    for (int t = 0; t < pairs; ++t) {
      pair_points.row(0) = lambda1.row(t);
      pair_points.row(1) = lambda2.row(t);
      const PredictiveTheta pred = fold.predict(pair_points);
      const Eigen::VectorXd g1 = setup.coefficients(pair_points.row(0)).row(i).transpose();
      const Eigen::VectorXd g2 = setup.coefficients(pair_points.row(1)).row(i).transpose();
      const double mu = g1.dot(pred.mean.head(p)) - g2.dot(pred.mean.tail(p));
      double var = g1.dot(pred.cov.topLeftCorner(p, p) * g1) -
                   2.0 * g1.dot(pred.cov.topRightCorner(p, p) * g2) +
                   g2.dot(pred.cov.bottomRightCorner(p, p) * g2);
      if (var <= 0.0) {
        if (var < -1e-10)
          throw NumericError("compensation_coverage: pair variance below -1e-10");
        var = 1e-12;  // identical pair or roundoff; interval degenerates
      }
      if (std::abs(mu) <= quantile * std::sqrt(var)) ++covered;
    }
    report.x_value[slot] = setup.obs.x[i];
    report.coverage[slot] = static_cast<double>(covered) / pairs;
  });
  return report;
}

}  // namespace gplincc
