#pragma once

#include <Eigen/Dense>

#include <vector>

#include "gplincc/types.hpp"

namespace gplincc {

// Matern 5/2 hyperparameters of one calibration component: a signal variance
// and one lengthscale per input dimension.
struct ComponentKernel {
  double variance = 1.0;
  Eigen::VectorXd lengthscales;

  [[nodiscard]] int dim() const { return static_cast<int>(lengthscales.size()); }
};

// Matern 5/2 covariance at distance d:
//   sigma2 * (1 + sqrt(5) d/psi + (5/3)(d/psi)^2) * exp(-sqrt(5) d/psi)
double matern52(double d, double sigma2, double psi);

// Cross-covariance between point sets A (a x q) and B (b x q) for one
// component.  Multidimensional inputs use a product of unit-variance 1-D
// factors scaled by the single component variance.
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                              const ComponentKernel& kernel);

struct PriorCovariance {
  Eigen::MatrixXd cov;        // pm x pm, point-major, jitter included
  double jitter_scale = 0.0;  // diagonal boost as a multiple of each component variance
};

// Stacked prior covariance over the design for p independent components.
// Rows/columns follow StackLayout (point-major); the (j,j') block is the
// p x p diagonal of per-component kernel values.  A diagonal jitter of
// jitter_scale * variance_u is added per component, starting at 1e-8 and
// escalating tenfold until a Cholesky factorization succeeds; past 1e-4 a
// NumericError with a conditioning report is thrown.
PriorCovariance build_prior_cov(const Eigen::MatrixXd& design,
                                const std::vector<ComponentKernel>& kernels);

// Rectangular stacked cross-covariance between prediction points (k x q) and
// the design (m x q): pk x pm with p x p diagonal blocks.  No jitter.
Eigen::MatrixXd cross_cov(const Eigen::MatrixXd& points, const Eigen::MatrixXd& design,
                          const std::vector<ComponentKernel>& kernels);

}  // namespace gplincc
