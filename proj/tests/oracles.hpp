#pragma once

// Independent reference implementations the tests compare the library
// against: brute-force grid posteriors, dense quadrature marginalization,
// sampling estimators, and literal textbook formulas with explicit inverses.
// Everything here is deliberately simple and slow.

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gplincc/linearize.hpp"
#include "gplincc/posterior.hpp"
#include "gplincc/rng.hpp"
#include "gplincc/types.hpp"

namespace gplincc::test {

// Small random calibration instance with exact coefficient blocks.
struct RandomInstance {
  int p = 1, m = 1, n = 1;
  Eigen::MatrixXd design;                  // m x 1
  std::vector<Eigen::MatrixXd> g_blocks;   // m of n x p
  ObservationSet obs;
  HyperParams hyper;
};

RandomInstance make_random_instance(std::uint64_t seed, int max_p = 2, int max_m = 3,
                                    int max_n = 5);

// Stacked n x pm coefficient matrix [g_1 ... g_m].
Eigen::MatrixXd stack_g(const std::vector<Eigen::MatrixXd>& g_blocks);

// Conditional distribution in information form with explicit matrix inverses
// (no stabilization).
GaussianDist posterior_literal(const RandomInstance& inst, const PriorModel& prior);

// Conditional moments by normalized integration of likelihood x prior on a
// dense grid; only feasible for stacked dimension 1 or 2.
GaussianDist posterior_grid(const RandomInstance& inst, const PriorModel& prior,
                            int points_per_dim = 1201);

// log of the marginal likelihood integral of the stacked-dimension-2
// instance under the given prior, by dense 2-D quadrature.
double log_marginal_quadrature(const RandomInstance& inst, const PriorModel& prior,
                               int points_per_dim = 1501);

// Scalar minimizer by golden-section search on [lo, hi].
double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol);

// Lower Cholesky factor with a tiny-eigenvalue fallback for sampling from
// barely-PSD covariances.
Eigen::MatrixXd sampling_cholesky(const Eigen::MatrixXd& cov);

// Mean and covariance accumulated from draws (rows).
struct SampleMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};
SampleMoments sample_moments(const Eigen::MatrixXd& draws);

// Scratch directory that cleans up after itself.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  [[nodiscard]] std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace gplincc::test
