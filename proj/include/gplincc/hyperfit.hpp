#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "gplincc/linearize.hpp"
#include "gplincc/posterior.hpp"
#include "gplincc/types.hpp"

namespace gplincc {

// Sufficient statistics for hyperparameter selection: the per-point GLS
// summaries plus the design they live on.  Everything the selection
// criterion needs, nothing it does not.
struct MarginalData {
  Eigen::MatrixXd design;       // m x q
  Eigen::VectorXd gls_stack;    // pm
  Eigen::MatrixXd delta_block;  // pm x pm
  double log_det_delta = 0.0;
  double log_det_sigma_eps = 0.0;
  int n_obs = 0;
  int p = 1;

  [[nodiscard]] int m() const { return static_cast<int>(design.rows()); }
  [[nodiscard]] int q() const { return static_cast<int>(design.cols()); }
};

MarginalData make_marginal_data(const Eigen::MatrixXd& design,
                                const CalibrationMatrices& calib);

// Selection criterion: twice the negative log marginal likelihood of the
// observations under the prior, up to a constant that does not depend on the
// hyperparameters (exact when p = n).  With S = Delta + K and r = H beta -
// theta_gls:
//   l = r' S^-1 r - log|Delta| + n m log(2 pi) + m log|Sigma_eps| + log|S|
// Only differences of l are meaningful and only differences are tested.
double neg_log_marginal(const std::vector<ComponentKernel>& kernels, const Eigen::VectorXd& beta,
                        const MarginalData& data);

// Closed-form minimizer of l over the trend levels at fixed kernels:
//   beta = (H' S^-1 H)^-1 H' S^-1 theta_gls
Eigen::VectorXd profile_beta(const std::vector<ComponentKernel>& kernels,
                             const MarginalData& data);

struct OptimizerConfig {
  int multistarts = 10;
  // Search box in log space, one entry per parameter in packing order
  // (log sigma2_u, log psi_u1..uq per component).  Empty: derived from data.
  Eigen::VectorXd log_lower;
  Eigen::VectorXd log_upper;
  double f_tol = 1e-9;   // relative spread of simplex values
  double x_tol = 1e-7;   // simplex diameter
  int max_evals = 2000;  // per start
  std::uint64_t seed = 0;
  int workers = 1;
};

// Default search box: per-component log variance spans 1e-4..1e4 times the
// variance of the stacked GLS estimates; log lengthscales span 0.01..10
// times the design range per dimension.
std::pair<Eigen::VectorXd, Eigen::VectorXd> default_log_box(const MarginalData& data);

struct TraceEntry {
  int start = 0;
  int eval = 0;
  Eigen::VectorXd params;  // log-space position
  double nll = 0.0;
};

struct FitResult {
  HyperParams hyper;
  double nll = 0.0;
  int best_start = 0;
  std::vector<TraceEntry> trace;
  Eigen::VectorXd log_lower;
  Eigen::VectorXd log_upper;
};

// Derivative-free simplex descent on the log hyperparameters with the trend
// profiled out at every evaluation.  Starts come from a Latin hypercube over
// the search box; evaluations that fail numerically or leave the box count
// as +infinity.  The reducer keeps the lowest criterion value, breaking ties
// by lowest start index, so results are reproducible for a given seed
// regardless of worker count.
FitResult fit_hyperparameters(const MarginalData& data, const OptimizerConfig& config = {});

// Kernel vector for a packed log-parameter position.
std::vector<ComponentKernel> unpack_kernels(const Eigen::VectorXd& log_params, int p, int q);

struct SimplexResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int evals = 0;
};

// Nelder-Mead with standard coefficients (reflect 1, expand 2, contract 0.5,
// shrink 0.5).  Stops when the simplex value spread falls under
// f_tol*(1+|best|), the simplex diameter falls under x_tol, or max_evals is
// reached.  Nonfinite objective values are treated as worst-possible.
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                          const Eigen::VectorXd& x0, const Eigen::VectorXd& step, double f_tol,
                          double x_tol, int max_evals);

}  // namespace gplincc
