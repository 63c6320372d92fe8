#include "gplincc/benchmarks.hpp"

#include <cmath>
#include <numbers>

#include "gplincc/rng.hpp"

namespace gplincc {

namespace {

Eigen::VectorXd linspace(double lo, double hi, int n) {
  if (n == 1) return Eigen::VectorXd::Constant(1, lo);
  return Eigen::VectorXd::LinSpaced(n, lo, hi);
}

double theta1_ex2(double lambda) { return lambda * std::sin(10.0 * lambda) + 1.0; }

double theta2_ex2(double lambda) {
  return std::sin(2.0 * std::numbers::pi * lambda / 10.0) +
         0.2 * std::sin(20.0 * std::numbers::pi * lambda / 2.5) + 1.75;
}

double theta_ex3(double lambda) { return 1.0 + lambda * std::sin(10.0 * lambda); }

}  // namespace

std::vector<Eigen::MatrixXd> Benchmark::coefficients_at(const Eigen::MatrixXd& design) const {
  if (design.cols() != 1) throw std::invalid_argument("Benchmark: inputs are scalar");
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(design.rows());
  for (Eigen::Index j = 0; j < design.rows(); ++j) blocks.push_back(coefficients(design(j, 0)));
  return blocks;
}

CoefficientFn Benchmark::coefficient_fn() const {
  const auto g = coefficients;
  return [g](const Eigen::RowVectorXd& lambda) {
    if (lambda.size() != 1) throw std::invalid_argument("Benchmark: inputs are scalar");
    return g(lambda[0]);
  };
}

Eigen::MatrixXd Benchmark::true_theta_at(const Eigen::MatrixXd& points) const {
  if (points.cols() != 1) throw std::invalid_argument("Benchmark: inputs are scalar");
  Eigen::MatrixXd out(points.rows(), p);
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    out.row(i) = true_theta(points(i, 0)).transpose();
  return out;
}

Benchmark make_example1(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_example1: n must be at least 1");
  Benchmark bench;
  bench.id = 1;
  bench.p = 1;
  bench.lambda_dist = LambdaDistribution::uniform(1.0, 10.0);

  SplitMix64 rng(seed);
  const double sd = std::sqrt(2.0);
  bench.obs.x = linspace(0.0, 1.0, n);  // placement is bookkeeping only here
  bench.obs.z.resize(n);
  for (int i = 0; i < n; ++i) bench.obs.z[i] = 5.0 + sd * rng.next_normal();
  bench.obs.noise_var = Eigen::VectorXd::Constant(n, 2.0);

  bench.true_theta = [](double lambda) { return Eigen::VectorXd::Constant(1, 5.0 / lambda); };
  bench.coefficients = [n](double lambda) {
    return Eigen::MatrixXd::Constant(n, 1, lambda);
  };
  return bench;
}

Benchmark make_example2(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("make_example2: n must be at least 2");
  Benchmark bench;
  bench.id = 2;
  bench.p = 2;
  bench.lambda_dist = LambdaDistribution::uniform(0.0, 1.0);

  const Eigen::VectorXd x = linspace(-4.0, 4.0, n);
  const Eigen::VectorXd r1 = (x.array().square() + x.array() + 1.0).matrix();
  const Eigen::VectorXd r2 = (x.array().square() + x.array() + 4.0).matrix();
  const Eigen::VectorXd r = r1 + r2;

  SplitMix64 rng(seed);
  bench.obs.x = x;
  bench.obs.z.resize(n);
  bench.obs.noise_var.resize(n);
  for (int i = 0; i < n; ++i) {
    const double sd = 0.06 * std::abs(r[i]);
    bench.obs.z[i] = r[i] + sd * rng.next_normal();
    bench.obs.noise_var[i] = sd * sd;
  }

  bench.true_theta = [](double lambda) {
    Eigen::VectorXd theta(2);
    theta << theta1_ex2(lambda), theta2_ex2(lambda);
    return theta;
  };
  bench.coefficients = [r1, r2](double lambda) {
    Eigen::MatrixXd g(r1.size(), 2);
    g.col(0) = r1 / theta1_ex2(lambda);
    g.col(1) = r2 / theta2_ex2(lambda);
    return g;
  };
  return bench;
}

Benchmark make_example3(int n, double lambda0, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_example3: n must be at least 1");
  if (!(lambda0 >= 0.0 && lambda0 <= 1.0))
    throw std::invalid_argument("make_example3: lambda0 must lie in [0,1]");
  Benchmark bench;
  bench.id = 3;
  bench.p = 1;
  bench.lambda0 = lambda0;
  bench.lambda_dist = LambdaDistribution::uniform(0.0, 1.0);

  const Eigen::VectorXd x = linspace(-2.0, 2.0, n);
  auto response = [x](double lambda) {
    return (3.0 * x.array().square() + 2.0 * lambda * lambda * x.array() + 1.0 + lambda)
        .matrix()
        .eval();
  };
  const Eigen::VectorXd r0 = response(lambda0);
  if ((r0.array().abs() < 1e-12).any())
    throw std::invalid_argument("make_example3: degenerate response grid (r = 0)");

  SplitMix64 rng(seed);
  bench.obs.x = x;
  bench.obs.z.resize(n);
  bench.obs.noise_var.resize(n);
  for (int i = 0; i < n; ++i) {
    const double var = 0.06 * r0[i] * r0[i];  // variance convention as stated for this problem
    bench.obs.z[i] = r0[i] + std::sqrt(var) * rng.next_normal();
    bench.obs.noise_var[i] = var;
  }

  bench.true_theta = [](double lambda) {
    return Eigen::VectorXd::Constant(1, theta_ex3(lambda));
  };
  bench.coefficients = [response](double lambda) {
    return Eigen::MatrixXd(response(lambda) / theta_ex3(lambda));
  };
  bench.discrepancy_ratio = [response, r0](double lambda) {
    return Eigen::VectorXd(r0.array() / response(lambda).array());
  };
  return bench;
}

Benchmark make_example(int id, int n, std::uint64_t seed, double lambda0) {
  switch (id) {
    case 1: return make_example1(n, seed);
    case 2: return make_example2(n, seed);
    case 3: return make_example3(n, lambda0, seed);
    default: throw std::invalid_argument("make_example: id must be 1, 2, or 3");
  }
}

SimulationBundle simulate_bundle(const Benchmark& bench, const Eigen::MatrixXd& design,
                                 int n_sim, std::uint64_t seed) {
  if (design.cols() != 1) throw std::invalid_argument("simulate_bundle: inputs are scalar");
  const int m = static_cast<int>(design.rows());
  const int n = bench.n();
  const int p = bench.p;

  // Coefficient draws cover the true range with some margin.
  const Eigen::MatrixXd truth = bench.true_theta_at(
      Eigen::MatrixXd(linspace(bench.lambda_dist.lower[0], bench.lambda_dist.upper[0], 201)));
  Eigen::VectorXd lo(p), hi(p);
  for (int u = 0; u < p; ++u) {
    const double min = truth.col(u).minCoeff();
    const double max = truth.col(u).maxCoeff();
    const double pad = 0.25 * (max - min) + 0.1;
    lo[u] = min - pad;
    hi[u] = max + pad;
  }

  SplitMix64 rng(seed);
  SimulationBundle bundle;
  bundle.m = m;
  bundle.n = n;
  bundle.p = p;
  bundle.n_sim = n_sim;
  bundle.theta.resize(static_cast<std::size_t>(m) * n);
  bundle.y.resize(bundle.theta.size());
  for (int j = 0; j < m; ++j) {
    const Eigen::MatrixXd g = bench.coefficients(design(j, 0));
    for (int i = 0; i < n; ++i) {
      Eigen::MatrixXd theta(n_sim, p);
      for (int s = 0; s < n_sim; ++s)
        for (int u = 0; u < p; ++u) theta(s, u) = rng.next_uniform(lo[u], hi[u]);
      bundle.theta[bundle.cell(j, i)] = theta;
      bundle.y[bundle.cell(j, i)] = theta * g.row(i).transpose();
    }
  }
  bundle.validate();
  return bundle;
}

}  // namespace gplincc
