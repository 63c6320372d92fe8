#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "gplincc/design.hpp"

using namespace gplincc;

TEST_CASE("lhs_uniform single point lies in the box") {
  const auto dist = LambdaDistribution::uniform(1.0, 10.0);
  const DesignSet design = lhs_uniform(1, dist, 42);
  CHECK(design.points.rows() == 1);
  CHECK(design.points(0, 0) >= 1.0);
  CHECK(design.points(0, 0) < 10.0);
}

TEST_CASE("lhs_uniform stratifies every dimension") {
  LambdaDistribution dist;
  dist.lower = (Eigen::VectorXd(2) << 1.0, -3.0).finished();
  dist.upper = (Eigen::VectorXd(2) << 10.0, 5.0).finished();
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const int m = 10;
    const DesignSet design = lhs_uniform(m, dist, seed);
    for (int d = 0; d < 2; ++d) {
      std::set<int> strata;
      const double width = (dist.upper[d] - dist.lower[d]) / m;
      for (int i = 0; i < m; ++i) {
        const double u = (design.points(i, d) - dist.lower[d]) / width;
        CHECK(u >= 0.0);
        CHECK(u < m);
        strata.insert(static_cast<int>(u));
      }
      CHECK(strata.size() == static_cast<std::size_t>(m));  // one point per stratum
    }
  }
}

TEST_CASE("lhs_uniform is deterministic and seed-sensitive") {
  const auto dist = LambdaDistribution::uniform(0.0, 1.0);
  const DesignSet a = lhs_uniform(7, dist, 123);
  const DesignSet b = lhs_uniform(7, dist, 123);
  const DesignSet c = lhs_uniform(7, dist, 124);
  CHECK((a.points - b.points).norm() == 0.0);
  CHECK((a.points - c.points).norm() > 0.0);
}

TEST_CASE("lhs_uniform rows are pairwise distinct") {
  const auto dist = LambdaDistribution::uniform(0.0, 1.0);
  const DesignSet design = lhs_uniform(50, dist, 7);
  std::vector<double> values(design.points.col(0).data(), design.points.col(0).data() + 50);
  std::sort(values.begin(), values.end());
  CHECK(std::adjacent_find(values.begin(), values.end()) == values.end());
}

TEST_CASE("lhs_uniform validates arguments") {
  const auto dist = LambdaDistribution::uniform(0.0, 1.0);
  CHECK_THROWS_AS(lhs_uniform(0, dist, 1), std::invalid_argument);
  LambdaDistribution bad;
  bad.lower = Eigen::VectorXd::Constant(1, 2.0);
  bad.upper = Eigen::VectorXd::Constant(1, 1.0);
  CHECK_THROWS_AS(lhs_uniform(3, bad, 1), std::invalid_argument);
}

TEST_CASE("sample_iid concentrates on the box mean") {
  const auto dist = LambdaDistribution::uniform(1.0, 10.0);
  const Eigen::MatrixXd draws = sample_iid(1000, dist, std::uint64_t{5});
  CHECK(draws.minCoeff() >= 1.0);
  CHECK(draws.maxCoeff() < 10.0);
  CHECK(std::abs(draws.mean() - 5.5) < 0.3);
}

TEST_CASE("sample_iid single draw is reproducible") {
  const auto dist = LambdaDistribution::uniform(-2.0, 2.0);
  const Eigen::MatrixXd a = sample_iid(1, dist, std::uint64_t{77});
  const Eigen::MatrixXd b = sample_iid(1, dist, std::uint64_t{77});
  CHECK(a(0, 0) == b(0, 0));
}

TEST_CASE("rng normal draws have unit scale") {
  SplitMix64 rng(2024);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.next_normal();
    sum += v;
    sum_sq += v * v;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.05);
}
