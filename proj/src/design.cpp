#include "gplincc/design.hpp"

#include <numeric>
#include <vector>

namespace gplincc {

DesignSet lhs_uniform(int m, const LambdaDistribution& dist, std::uint64_t seed) {
  dist.validate();
  if (m <= 0) throw std::invalid_argument("lhs_uniform: m must be positive");

  const int q = dist.dim();
  SplitMix64 rng(seed);
  Eigen::MatrixXd points(m, q);
  std::vector<int> strata(m);
  for (int d = 0; d < q; ++d) {
    std::iota(strata.begin(), strata.end(), 0);
    for (int i = m - 1; i > 0; --i)  // Fisher-Yates
      std::swap(strata[i], strata[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
    const double width = (dist.upper[d] - dist.lower[d]) / m;
    for (int i = 0; i < m; ++i)
      points(i, d) = dist.lower[d] + (strata[i] + rng.next_double()) * width;
  }
  return DesignSet{points, dist, seed};
}

Eigen::MatrixXd sample_iid(int count, const LambdaDistribution& dist, SplitMix64& rng) {
  dist.validate();
  if (count <= 0) throw std::invalid_argument("sample_iid: count must be positive");
  Eigen::MatrixXd out(count, dist.dim());
  for (int i = 0; i < count; ++i)
    for (int d = 0; d < dist.dim(); ++d)
      out(i, d) = rng.next_uniform(dist.lower[d], dist.upper[d]);
  return out;
}

Eigen::MatrixXd sample_iid(int count, const LambdaDistribution& dist, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return sample_iid(count, dist, rng);
}

}  // namespace gplincc
