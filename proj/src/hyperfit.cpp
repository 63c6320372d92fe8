#include "gplincc/hyperfit.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "gplincc/design.hpp"
#include "gplincc/parallel.hpp"

namespace gplincc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::LLT<Eigen::MatrixXd> factor_s(const std::vector<ComponentKernel>& kernels,
                                     const MarginalData& data) {
  const PriorCovariance prior = build_prior_cov(data.design, kernels);
  Eigen::LLT<Eigen::MatrixXd> llt(data.delta_block + prior.cov);
  if (llt.info() != Eigen::Success)
    throw NumericError("neg_log_marginal: Delta + K factorization failed");
  return llt;
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

MarginalData make_marginal_data(const Eigen::MatrixXd& design,
                                const CalibrationMatrices& calib) {
  if (design.rows() != calib.layout.m)
    throw std::invalid_argument("make_marginal_data: design/calibration sizes disagree");
  MarginalData data;
  data.design = design;
  data.gls_stack = calib.gls_stack;
  data.delta_block = calib.delta_block;
  data.log_det_delta = calib.log_det_delta;
  data.log_det_sigma_eps = calib.log_det_sigma_eps;
  data.n_obs = calib.n_obs;
  data.p = calib.layout.p;
  return data;
}

double neg_log_marginal(const std::vector<ComponentKernel>& kernels, const Eigen::VectorXd& beta,
                        const MarginalData& data) {
  if (static_cast<int>(kernels.size()) != data.p || beta.size() != data.p)
    throw std::invalid_argument("neg_log_marginal: component count disagrees");
  const Eigen::LLT<Eigen::MatrixXd> llt = factor_s(kernels, data);
  const Eigen::VectorXd r = TrendModel{beta}.mean_stack(data.m()) - data.gls_stack;
  const double quad = r.dot(llt.solve(r));
  return quad - data.log_det_delta +
         static_cast<double>(data.n_obs) * data.m() * std::log(2.0 * std::numbers::pi) +
         data.m() * data.log_det_sigma_eps + log_det_from_llt(llt);
}

Eigen::VectorXd profile_beta(const std::vector<ComponentKernel>& kernels,
                             const MarginalData& data) {
  if (static_cast<int>(kernels.size()) != data.p)
    throw std::invalid_argument("profile_beta: component count disagrees");
  const Eigen::LLT<Eigen::MatrixXd> llt = factor_s(kernels, data);
  const Eigen::MatrixXd h = TrendModel{Eigen::VectorXd::Zero(data.p)}.basis(data.m());
  const Eigen::MatrixXd sh = llt.solve(h);
  Eigen::LLT<Eigen::MatrixXd> normal(Eigen::MatrixXd(h.transpose() * sh));
  if (normal.info() != Eigen::Success)
    throw NumericError("profile_beta: singular normal matrix");
  return normal.solve(sh.transpose() * data.gls_stack);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> default_log_box(const MarginalData& data) {
  const int p = data.p;
  const int q = data.q();
  double v = 1.0;
  if (data.gls_stack.size() > 1) {
    const double mean = data.gls_stack.mean();
    v = (data.gls_stack.array() - mean).square().sum() / (data.gls_stack.size() - 1);
  }
  if (!(v > 0.0) || !std::isfinite(v)) v = 1.0;

  Eigen::VectorXd lower(p * (1 + q)), upper(p * (1 + q));
  for (int u = 0; u < p; ++u) {
    const int base = u * (1 + q);
    lower[base] = std::log(1e-4 * v);
    upper[base] = std::log(1e4 * v);
    for (int d = 0; d < q; ++d) {
      double range = data.design.col(d).maxCoeff() - data.design.col(d).minCoeff();
      if (!(range > 0.0)) range = 1.0;
      lower[base + 1 + d] = std::log(0.01 * range);
      upper[base + 1 + d] = std::log(10.0 * range);
    }
  }
  return {lower, upper};
}

std::vector<ComponentKernel> unpack_kernels(const Eigen::VectorXd& log_params, int p, int q) {
  if (log_params.size() != static_cast<Eigen::Index>(p) * (1 + q))
    throw std::invalid_argument("unpack_kernels: packed size disagrees");
  std::vector<ComponentKernel> kernels(p);
  for (int u = 0; u < p; ++u) {
    const int base = u * (1 + q);
    kernels[u].variance = std::exp(log_params[base]);
    kernels[u].lengthscales =
        log_params.segment(base + 1, q).array().exp().matrix();
  }
  return kernels;
}

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                          const Eigen::VectorXd& x0, const Eigen::VectorXd& step, double f_tol,
                          double x_tol, int max_evals) {
  const int n = static_cast<int>(x0.size());
  if (n == 0 || step.size() != n) throw std::invalid_argument("nelder_mead: bad dimensions");

  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    const double f = objective(x);
    return std::isfinite(f) ? f : kInf;
  };

  std::vector<Eigen::VectorXd> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  fs[0] = eval(xs[0]);
  for (int i = 0; i < n; ++i) {
    xs[i + 1][i] += step[i];
    fs[i + 1] = eval(xs[i + 1]);
  }

  std::vector<int> order(n + 1);
  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = order[0], second_worst = order[n - 1], worst = order[n];

    double diameter = 0.0;
    for (int i = 1; i <= n; ++i)
      diameter = std::max(diameter, (xs[order[i]] - xs[best]).norm());
    // Both spreads must collapse: a flat objective across the simplex says
    // nothing about location when the vertices straddle the minimum.
    const bool f_done = std::isfinite(fs[worst]) &&
                        fs[worst] - fs[best] <= f_tol * (1.0 + std::abs(fs[best]));
    if ((f_done && diameter <= x_tol) || evals >= max_evals)
      return SimplexResult{xs[best], fs[best], evals};

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += xs[order[i]];
    centroid /= n;

    const Eigen::VectorXd reflected = centroid + (centroid - xs[worst]);
    const double f_reflected = eval(reflected);
    if (f_reflected < fs[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - xs[worst]);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        xs[worst] = expanded;
        fs[worst] = f_expanded;
      } else {
        xs[worst] = reflected;
        fs[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < fs[second_worst]) {
      xs[worst] = reflected;
      fs[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < fs[worst];
    const Eigen::VectorXd contracted =
        outside ? centroid + 0.5 * (reflected - centroid) : centroid + 0.5 * (xs[worst] - centroid);
    const double f_contracted = eval(contracted);
    if (f_contracted < std::min(f_reflected, fs[worst])) {
      xs[worst] = contracted;
      fs[worst] = f_contracted;
      continue;
    }
    for (int i = 1; i <= n; ++i) {  // shrink toward best
      xs[order[i]] = xs[best] + 0.5 * (xs[order[i]] - xs[best]);
      fs[order[i]] = eval(xs[order[i]]);
    }
  }
}

FitResult fit_hyperparameters(const MarginalData& data, const OptimizerConfig& config) {
  const int p = data.p;
  const int q = data.q();
  const int dim = p * (1 + q);
  if (config.multistarts <= 0)
    throw std::invalid_argument("fit_hyperparameters: multistarts must be positive");

  Eigen::VectorXd lower = config.log_lower, upper = config.log_upper;
  if (lower.size() == 0 || upper.size() == 0) std::tie(lower, upper) = default_log_box(data);
  if (lower.size() != dim || upper.size() != dim)
    throw std::invalid_argument("fit_hyperparameters: search box size disagrees");

  LambdaDistribution box{lower, upper};
  const Eigen::MatrixXd starts =
      lhs_uniform(config.multistarts, box, config.seed).points;

  struct StartOutcome {
    Eigen::VectorXd x;
    double f = kInf;
    std::vector<TraceEntry> trace;
  };
  std::vector<StartOutcome> outcomes(config.multistarts);

  parallel_for(config.multistarts, config.workers, [&](int s) {
    StartOutcome& outcome = outcomes[s];
    int eval_id = 0;
    auto objective = [&](const Eigen::VectorXd& x) {
      double f = kInf;
      if ((x.array() >= lower.array()).all() && (x.array() <= upper.array()).all()) {
        try {
          const auto kernels = unpack_kernels(x, p, q);
          f = neg_log_marginal(kernels, profile_beta(kernels, data), data);
        } catch (const NumericError&) {
          f = kInf;
        }
      }
      outcome.trace.push_back(TraceEntry{s, eval_id++, x, f});
      return f;
    };
    const Eigen::VectorXd step = 0.05 * (upper - lower);
    const SimplexResult result = nelder_mead(objective, starts.row(s).transpose(), step,
                                             config.f_tol, config.x_tol, config.max_evals);
    outcome.x = result.x;
    outcome.f = result.f;
  });

  int best = -1;
  for (int s = 0; s < config.multistarts; ++s) {
    if (best < 0 || outcomes[s].f < outcomes[best].f) best = s;
  }
  if (best < 0 || !std::isfinite(outcomes[best].f))
    throw NumericError("fit_hyperparameters: every start failed");

  FitResult result;
  result.best_start = best;
  result.nll = outcomes[best].f;
  result.log_lower = lower;
  result.log_upper = upper;
  result.hyper.kernels = unpack_kernels(outcomes[best].x, p, q);
  result.hyper.beta = profile_beta(result.hyper.kernels, data);
  for (auto& outcome : outcomes)
    result.trace.insert(result.trace.end(), outcome.trace.begin(), outcome.trace.end());
  return result;
}

}  // namespace gplincc
