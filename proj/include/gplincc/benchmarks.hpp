#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

#include "gplincc/diagnostics.hpp"
#include "gplincc/linearize.hpp"
#include "gplincc/types.hpp"

namespace gplincc {

// One of the three analytic calibration problems: observations, the exact
// linear coefficients at any input, and the true calibration functions they
// were built from.  All three use a scalar input (q = 1).
struct Benchmark {
  int id = 0;
  int p = 1;
  ObservationSet obs;
  LambdaDistribution lambda_dist;
  double lambda0 = 0.0;  // problem 3 only: input the data were generated at

  std::function<Eigen::VectorXd(double)> true_theta;        // p values
  std::function<Eigen::MatrixXd(double)> coefficients;      // n x p
  std::function<Eigen::VectorXd(double)> discrepancy_ratio; // n values; problem 3 only

  [[nodiscard]] int n() const { return obs.size(); }

  // Coefficient blocks at every design row.
  [[nodiscard]] std::vector<Eigen::MatrixXd> coefficients_at(
      const Eigen::MatrixXd& design) const;

  // Row-vector interface used by the diagnostics.
  [[nodiscard]] CoefficientFn coefficient_fn() const;

  // True calibration values at a set of inputs, one row per input.
  [[nodiscard]] Eigen::MatrixXd true_theta_at(const Eigen::MatrixXd& points) const;
};

// Constant-truth problem: z_i = 5 + e_i with Var e = 2, response y = lambda
// theta, true theta(lambda) = 5/lambda, lambda ~ U[1,10].
Benchmark make_example1(int n, std::uint64_t seed);

// Two-component compensated problem on x in [-4,4]: r1 = x^2+x+1 and
// r2 = x^2+x+4 split the constant signal r = r1+r2; coefficients r_u /
// theta_u(lambda) compensate exactly for every lambda.  Noise sd is
// 0.06*|r(x_i)|; lambda ~ U[0,1].
Benchmark make_example2(int n, std::uint64_t seed);

// Non-compensated problem on x in [-2,2]: the response r_lambda(x) =
// 3x^2 + 2 lambda^2 x + 1 + lambda genuinely depends on lambda, data are
// generated at lambda0 with noise variance 0.06*r_lambda0(x_i)^2, and the
// discrepancy ratio r_lambda0/r_lambda measures the failure of
// interchangeability.  lambda ~ U[0,1].
Benchmark make_example3(int n, double lambda0, std::uint64_t seed);

Benchmark make_example(int id, int n, std::uint64_t seed, double lambda0 = 0.5);

// Noiseless simulator runs of the benchmark's linear response for estimating
// coefficients: per (design point, control point) cell, n_sim coefficient
// draws uniform on a box padded around the true theta range, with the exact
// linear outputs.
SimulationBundle simulate_bundle(const Benchmark& bench, const Eigen::MatrixXd& design,
                                 int n_sim, std::uint64_t seed);

}  // namespace gplincc
