#pragma once

#include <Eigen/Dense>

#include <vector>

#include "gplincc/kernel.hpp"
#include "gplincc/linearize.hpp"
#include "gplincc/types.hpp"

namespace gplincc {

// Constant trend: one prior level per component, repeated over the design.
struct TrendModel {
  Eigen::VectorXd beta;

  [[nodiscard]] int p() const { return static_cast<int>(beta.size()); }

  // pm x p indicator basis H with H[(j,u), u] = 1, so the stacked prior mean
  // is H beta.
  [[nodiscard]] Eigen::MatrixXd basis(int m) const {
    const StackLayout layout{p(), m};
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(layout.size(), p());
    for (int j = 0; j < m; ++j)
      for (int u = 0; u < p(); ++u) h(layout.index(j, u), u) = 1.0;
    return h;
  }

  [[nodiscard]] Eigen::VectorXd mean_stack(int m) const {
    const StackLayout layout{p(), m};
    Eigen::VectorXd mean(layout.size());
    for (int j = 0; j < m; ++j) mean.segment(j * p(), p()) = beta;
    return mean;
  }
};

// Complete prior: trend levels plus one kernel per component.
struct HyperParams {
  Eigen::VectorXd beta;
  std::vector<ComponentKernel> kernels;

  [[nodiscard]] int p() const { return static_cast<int>(kernels.size()); }
  [[nodiscard]] TrendModel trend() const { return TrendModel{beta}; }
  void validate() const {
    if (kernels.empty() || beta.size() != static_cast<Eigen::Index>(kernels.size()))
      throw std::invalid_argument("HyperParams: beta/kernel count disagrees");
  }
};

// Prior of the stacked coefficients over the design: mean H beta and the
// jittered stacked kernel matrix.
struct PriorModel {
  Eigen::VectorXd mean;  // pm
  Eigen::MatrixXd cov;   // pm x pm, jitter on the diagonal
  double jitter_scale = 0.0;
};

PriorModel build_prior(const Eigen::MatrixXd& design, const HyperParams& hyper);

// Conditional distribution of the stacked coefficients given the
// observations, computed in the shifted form
//   mean = M + K (Delta + K)^-1 (theta_gls - M)
//   cov  = K - K (Delta + K)^-1 K
// which needs a single factorization of Delta + K and no inverse of either
// summand.  Equivalent to the information-form update
//   cov = (Delta^-1 + K^-1)^-1,  mean = cov (K^-1 M + G' Sigma^-1 z).
GaussianDist posterior_theta(const CalibrationMatrices& calib, const PriorModel& prior);

}  // namespace gplincc
