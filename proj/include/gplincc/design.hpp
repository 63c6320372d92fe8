#pragma once

#include <Eigen/Dense>

#include "gplincc/rng.hpp"
#include "gplincc/types.hpp"

namespace gplincc {

// Latin hypercube sample of m points over the box: every 1-D projection puts
// exactly one point in each of the m equal strata, with uniform position
// inside the stratum and an independent random stratum permutation per
// dimension.  Deterministic for a given seed.
DesignSet lhs_uniform(int m, const LambdaDistribution& dist, std::uint64_t seed);

// count i.i.d. uniform draws from the box, one row per draw.
Eigen::MatrixXd sample_iid(int count, const LambdaDistribution& dist, SplitMix64& rng);
Eigen::MatrixXd sample_iid(int count, const LambdaDistribution& dist, std::uint64_t seed);

}  // namespace gplincc
