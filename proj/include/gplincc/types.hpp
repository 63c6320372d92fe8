#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace gplincc {

// Thrown when a linear-algebra step fails beyond repair (e.g. a covariance
// matrix that stays indefinite after jitter escalation).  Invalid caller
// input raises std::invalid_argument instead.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Addressing scheme for the stacked coefficient vector over a design of m
// calibration points and p components.  Storage is point-major: entry (j, u)
// lives at j*p + u, so all components of one design point are contiguous.
struct StackLayout {
  int p = 1;  // components per point
  int m = 0;  // design points

  [[nodiscard]] int size() const { return p * m; }
  [[nodiscard]] int index(int point, int component) const {
    return point * p + component;
  }

  // Permutation into component-major order: position u*m + j of the result
  // holds the point-major index of (j, u).  Applying it to rows/columns of a
  // stacked covariance exposes one dense block per component.
  [[nodiscard]] Eigen::VectorXi component_major_order() const {
    Eigen::VectorXi order(size());
    for (int u = 0; u < p; ++u)
      for (int j = 0; j < m; ++j) order[u * m + j] = index(j, u);
    return order;
  }
};

// A plain Gaussian in R^dim; stacked distributions use StackLayout indexing.
struct GaussianDist {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  [[nodiscard]] int dim() const { return static_cast<int>(mean.size()); }
};

// Uniform distribution of the chain input over an axis-aligned box.
struct LambdaDistribution {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  [[nodiscard]] int dim() const { return static_cast<int>(lower.size()); }
  [[nodiscard]] Eigen::VectorXd range() const { return upper - lower; }

  void validate() const {
    if (lower.size() == 0 || lower.size() != upper.size())
      throw std::invalid_argument("LambdaDistribution: empty or mismatched bounds");
    for (int d = 0; d < dim(); ++d) {
      if (!std::isfinite(lower[d]) || !std::isfinite(upper[d]) || lower[d] >= upper[d])
        throw std::invalid_argument("LambdaDistribution: bounds must be finite with lower < upper");
    }
  }

  static LambdaDistribution uniform(double lo, double hi) {
    LambdaDistribution d;
    d.lower = Eigen::VectorXd::Constant(1, lo);
    d.upper = Eigen::VectorXd::Constant(1, hi);
    d.validate();
    return d;
  }
};

// Calibration-input design: m rows of q-dimensional points, plus the
// distribution they were drawn for and the seed that produced them.
struct DesignSet {
  Eigen::MatrixXd points;  // m x q
  LambdaDistribution dist;
  std::uint64_t seed = 0;

  [[nodiscard]] int size() const { return static_cast<int>(points.rows()); }
  [[nodiscard]] int dim() const { return static_cast<int>(points.cols()); }
};

// Field measurements z at n control points, with per-observation noise
// variance and an optional linearization-error variance added on top.
struct ObservationSet {
  Eigen::VectorXd x;                  // control-point coordinates (bookkeeping)
  Eigen::VectorXd z;                  // measured outputs
  Eigen::VectorXd noise_var;          // measurement-error variances
  Eigen::VectorXd linearization_var;  // extra variances; empty means all zero

  [[nodiscard]] int size() const { return static_cast<int>(z.size()); }

  [[nodiscard]] Eigen::VectorXd total_var() const {
    if (linearization_var.size() == 0) return noise_var;
    return noise_var + linearization_var;
  }

  void validate() const {
    const auto n = z.size();
    if (n == 0) throw std::invalid_argument("ObservationSet: empty");
    if (x.size() != n || noise_var.size() != n)
      throw std::invalid_argument("ObservationSet: field lengths disagree");
    if (linearization_var.size() != 0 && linearization_var.size() != n)
      throw std::invalid_argument("ObservationSet: linearization_var length disagrees");
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = noise_var[i] + (linearization_var.size() ? linearization_var[i] : 0.0);
      if (!std::isfinite(z[i]) || !std::isfinite(v) || v <= 0.0)
        throw std::invalid_argument("ObservationSet: nonfinite data or nonpositive variance");
    }
  }

  [[nodiscard]] ObservationSet without(int index) const {
    const int n = size();
    if (index < 0 || index >= n)
      throw std::invalid_argument("ObservationSet::without: index out of range");
    ObservationSet out;
    out.x.resize(n - 1);
    out.z.resize(n - 1);
    out.noise_var.resize(n - 1);
    if (linearization_var.size()) out.linearization_var.resize(n - 1);
    int k = 0;
    for (int i = 0; i < n; ++i) {
      if (i == index) continue;
      out.x[k] = x[i];
      out.z[k] = z[i];
      out.noise_var[k] = noise_var[i];
      if (linearization_var.size()) out.linearization_var[k] = linearization_var[i];
      ++k;
    }
    return out;
  }
};

}  // namespace gplincc
