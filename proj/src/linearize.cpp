#include "gplincc/linearize.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>
#include <sstream>

namespace gplincc {

void SimulationBundle::validate() const {
  if (m <= 0 || n <= 0 || p <= 0) throw std::invalid_argument("SimulationBundle: empty");
  if (n_sim < p + 1)
    throw std::invalid_argument("SimulationBundle: need at least p+1 runs per cell");
  if (theta.size() != static_cast<std::size_t>(m * n) || y.size() != theta.size())
    throw std::invalid_argument("SimulationBundle: cell count disagrees with m*n");
  for (int c = 0; c < m * n; ++c) {
    if (theta[c].rows() != n_sim || theta[c].cols() != p || y[c].size() != n_sim)
      throw std::invalid_argument("SimulationBundle: cell shape disagrees");
  }
}

LinearizedModel fit_linear_coefficients(const SimulationBundle& bundle,
                                        bool force_zero_intercept) {
  bundle.validate();
  const int cols = bundle.p + (force_zero_intercept ? 0 : 1);

  LinearizedModel model;
  model.zero_intercept = force_zero_intercept;
  model.intercept.assign(bundle.m, Eigen::VectorXd::Zero(bundle.n));
  model.slope.assign(bundle.m, Eigen::MatrixXd::Zero(bundle.n, bundle.p));
  model.residual_var.assign(bundle.m, Eigen::VectorXd::Zero(bundle.n));

  Eigen::MatrixXd design(bundle.n_sim, cols);
  for (int j = 0; j < bundle.m; ++j) {
    for (int i = 0; i < bundle.n; ++i) {
      const int c = bundle.cell(j, i);
      if (force_zero_intercept) {
        design = bundle.theta[c];
      } else {
        design.col(0).setOnes();
        design.rightCols(bundle.p) = bundle.theta[c];
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
      if (qr.rank() < cols) {
        std::ostringstream msg;
        msg << "fit_linear_coefficients: rank-deficient theta design at design point " << j + 1
            << ", control point " << i + 1;
        throw std::invalid_argument(msg.str());
      }
      const Eigen::VectorXd coef = qr.solve(bundle.y[c]);
      if (force_zero_intercept) {
        model.slope[j].row(i) = coef.transpose();
      } else {
        model.intercept[j][i] = coef[0];
        model.slope[j].row(i) = coef.tail(bundle.p).transpose();
      }
      const int dof = bundle.n_sim - cols;
      if (dof > 0) {
        const double ssr = (bundle.y[c] - design * coef).squaredNorm();
        model.residual_var[j][i] = ssr / dof;
      }
    }
  }
  return model;
}

CalibrationMatrices assemble_calibration_matrices(const std::vector<Eigen::MatrixXd>& g_blocks,
                                                  const std::vector<Eigen::VectorXd>& intercepts,
                                                  const ObservationSet& obs) {
  obs.validate();
  const int m = static_cast<int>(g_blocks.size());
  if (m == 0) throw std::invalid_argument("assemble_calibration_matrices: no design points");
  const int n = obs.size();
  const int p = static_cast<int>(g_blocks[0].cols());
  if (!intercepts.empty() && static_cast<int>(intercepts.size()) != m)
    throw std::invalid_argument("assemble_calibration_matrices: intercept count disagrees");

  const Eigen::VectorXd var = obs.total_var();
  const Eigen::VectorXd weights = var.cwiseInverse();

  CalibrationMatrices out;
  out.layout = StackLayout{p, m};
  out.delta.resize(m);
  out.delta_block = Eigen::MatrixXd::Zero(out.layout.size(), out.layout.size());
  out.gls_stack.resize(out.layout.size());
  out.n_obs = n;
  out.log_det_sigma_eps = var.array().log().sum();

  for (int j = 0; j < m; ++j) {
    const Eigen::MatrixXd& g = g_blocks[j];
    if (g.rows() != n || g.cols() != p)
      throw std::invalid_argument("assemble_calibration_matrices: coefficient block shape disagrees");
    Eigen::VectorXd z = obs.z;
    if (!intercepts.empty()) {
      if (intercepts[j].size() != n)
        throw std::invalid_argument("assemble_calibration_matrices: intercept length disagrees");
      z -= intercepts[j];
    }
    const Eigen::MatrixXd gw = weights.asDiagonal() * g;       // Sigma^-1 g
    const Eigen::MatrixXd gram = g.transpose() * gw;           // g' Sigma^-1 g
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "assemble_calibration_matrices: weighted Gram matrix not positive definite at "
          << "design point " << j + 1 << " (p = " << p << ", n = " << n << ")";
      throw NumericError(msg.str());
    }
    out.delta[j] = llt.solve(Eigen::MatrixXd::Identity(p, p));
    out.gls_stack.segment(j * p, p) = llt.solve(gw.transpose() * z);
    out.delta_block.block(j * p, j * p, p, p) = out.delta[j];
    double log_det_gram = 0.0;
    for (int u = 0; u < p; ++u) log_det_gram += 2.0 * std::log(llt.matrixL()(u, u));
    out.log_det_delta -= log_det_gram;
  }
  return out;
}

CalibrationMatrices assemble_calibration_matrices(const LinearizedModel& model,
                                                  const ObservationSet& obs) {
  if (model.zero_intercept) return assemble_calibration_matrices(model.slope, {}, obs);
  return assemble_calibration_matrices(model.slope, model.intercept, obs);
}

}  // namespace gplincc
