#include "gplincc/kernel.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <sstream>

namespace gplincc {

namespace {

constexpr double kSqrt5 = 2.23606797749978969;

void check_kernel(const ComponentKernel& kernel) {
  if (!(kernel.variance > 0.0) || !std::isfinite(kernel.variance))
    throw std::invalid_argument("kernel: variance must be positive and finite");
  if (kernel.lengthscales.size() == 0)
    throw std::invalid_argument("kernel: at least one lengthscale required");
  for (int d = 0; d < kernel.dim(); ++d) {
    if (!(kernel.lengthscales[d] > 0.0) || !std::isfinite(kernel.lengthscales[d]))
      throw std::invalid_argument("kernel: lengthscales must be positive and finite");
  }
}

double matern52_unit(double d, double psi) {
  const double t = kSqrt5 * d / psi;
  return (1.0 + t + t * t / 3.0) * std::exp(-t);
}

}  // namespace

double matern52(double d, double sigma2, double psi) {
  if (!std::isfinite(d) || d < 0.0)
    throw std::invalid_argument("matern52: distance must be finite and nonnegative");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2) || !(psi > 0.0) || !std::isfinite(psi))
    throw std::invalid_argument("matern52: hyperparameters must be positive and finite");
  return sigma2 * matern52_unit(d, psi);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                              const ComponentKernel& kernel) {
  check_kernel(kernel);
  if (a.cols() != b.cols() || a.cols() != kernel.dim())
    throw std::invalid_argument("kernel_matrix: input dimension does not match lengthscales");
  Eigen::MatrixXd out(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      double v = kernel.variance;
      for (int d = 0; d < kernel.dim(); ++d)
        v *= matern52_unit(std::abs(a(i, d) - b(j, d)), kernel.lengthscales[d]);
      out(i, j) = v;
    }
  }
  return out;
}

PriorCovariance build_prior_cov(const Eigen::MatrixXd& design,
                                const std::vector<ComponentKernel>& kernels) {
  const int m = static_cast<int>(design.rows());
  const int p = static_cast<int>(kernels.size());
  if (m == 0) throw std::invalid_argument("build_prior_cov: empty design");
  if (p == 0) throw std::invalid_argument("build_prior_cov: no components");

  const StackLayout layout{p, m};
  Eigen::MatrixXd base = Eigen::MatrixXd::Zero(layout.size(), layout.size());
  for (int u = 0; u < p; ++u) {
    const Eigen::MatrixXd block = kernel_matrix(design, design, kernels[u]);
    for (int j = 0; j < m; ++j)
      for (int jp = 0; jp < m; ++jp)
        base(layout.index(j, u), layout.index(jp, u)) = block(j, jp);
  }

  for (double scale = 1e-8; scale <= 1.0000001e-4; scale *= 10.0) {
    PriorCovariance prior{base, scale};
    for (int u = 0; u < p; ++u)
      for (int j = 0; j < m; ++j)
        prior.cov(layout.index(j, u), layout.index(j, u)) += scale * kernels[u].variance;
    if (Eigen::LLT<Eigen::MatrixXd>(prior.cov).info() == Eigen::Success) return prior;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(base);
  std::ostringstream msg;
  msg << "build_prior_cov: covariance not factorizable after jitter escalation to 1e-4"
      << " (size " << layout.size() << ", eigenvalue range [" << eig.eigenvalues().minCoeff()
      << ", " << eig.eigenvalues().maxCoeff() << "])";
  throw NumericError(msg.str());
}

Eigen::MatrixXd cross_cov(const Eigen::MatrixXd& points, const Eigen::MatrixXd& design,
                          const std::vector<ComponentKernel>& kernels) {
  const int k = static_cast<int>(points.rows());
  const int m = static_cast<int>(design.rows());
  const int p = static_cast<int>(kernels.size());
  if (k == 0 || m == 0) throw std::invalid_argument("cross_cov: empty point set");
  if (p == 0) throw std::invalid_argument("cross_cov: no components");

  const StackLayout rows{p, k};
  const StackLayout cols{p, m};
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows.size(), cols.size());
  for (int u = 0; u < p; ++u) {
    const Eigen::MatrixXd block = kernel_matrix(points, design, kernels[u]);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < m; ++j) out(rows.index(i, u), cols.index(j, u)) = block(i, j);
  }
  return out;
}

}  // namespace gplincc
