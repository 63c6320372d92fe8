#pragma once

#include <Eigen/Dense>

#include <vector>

#include "gplincc/types.hpp"

namespace gplincc {

// Simulator runs used to estimate the linear response of the chained model:
// for every (design point j, control point i) pair, n_sim draws of the
// upstream coefficients theta with the matching downstream outputs y.
struct SimulationBundle {
  int m = 0;      // design points
  int n = 0;      // control points
  int p = 1;      // theta components
  int n_sim = 0;  // simulator runs per (j, i) cell

  // Cell (j, i) lives at j*n + i.
  std::vector<Eigen::MatrixXd> theta;  // each n_sim x p
  std::vector<Eigen::VectorXd> y;      // each n_sim

  [[nodiscard]] int cell(int j, int i) const { return j * n + i; }
  void validate() const;
};

// Per-design-point linear response y ~ g0 + g1' theta, fitted cell by cell.
struct LinearizedModel {
  std::vector<Eigen::VectorXd> intercept;     // m entries of length n
  std::vector<Eigen::MatrixXd> slope;         // m entries of n x p
  std::vector<Eigen::VectorXd> residual_var;  // m entries of length n (candidate delta^2)
  bool zero_intercept = false;

  [[nodiscard]] int m() const { return static_cast<int>(slope.size()); }
  [[nodiscard]] int n() const { return m() ? static_cast<int>(slope[0].rows()) : 0; }
  [[nodiscard]] int p() const { return m() ? static_cast<int>(slope[0].cols()) : 0; }
};

// Ordinary least squares per (j, i) cell.  With force_zero_intercept the
// intercept column is dropped and g0 is fixed at zero.  Residual variance is
// SSR over the residual degrees of freedom, or zero when no freedom is left.
// A rank-deficient theta design raises invalid_argument naming the cell.
LinearizedModel fit_linear_coefficients(const SimulationBundle& bundle,
                                        bool force_zero_intercept = false);

// Generalized-least-squares summaries of the observations under the linear
// response, one block per design point.  All stacked quantities follow
// StackLayout (point-major).
struct CalibrationMatrices {
  StackLayout layout;
  std::vector<Eigen::MatrixXd> delta;  // m blocks of p x p: (g' Sigma^-1 g)^-1
  Eigen::MatrixXd delta_block;         // pm x pm block diagonal
  Eigen::VectorXd gls_stack;           // pm: per-point GLS estimates of theta
  double log_det_delta = 0.0;
  double log_det_sigma_eps = 0.0;  // log det of the diagonal observation covariance
  int n_obs = 0;
};

// Builds the GLS summaries from coefficient blocks g (one n x p matrix per
// design point) and observations.  Intercepts, when present, are subtracted
// from z before the per-point estimate.  A coefficient block whose weighted
// Gram matrix is not positive definite raises NumericError.
CalibrationMatrices assemble_calibration_matrices(const std::vector<Eigen::MatrixXd>& g_blocks,
                                                  const std::vector<Eigen::VectorXd>& intercepts,
                                                  const ObservationSet& obs);

inline CalibrationMatrices assemble_calibration_matrices(
    const std::vector<Eigen::MatrixXd>& g_blocks, const ObservationSet& obs) {
  return assemble_calibration_matrices(g_blocks, {}, obs);
}

CalibrationMatrices assemble_calibration_matrices(const LinearizedModel& model,
                                                  const ObservationSet& obs);

}  // namespace gplincc
