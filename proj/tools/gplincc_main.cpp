// Command-line pipelines around the calibration library: benchmark runs,
// replication studies, and ad-hoc fit / predict / diagnose stages working on
// CSV artifacts.  Every directory-producing run writes a manifest.cfg whose
// key=value lines feed back through --config to reproduce the run exactly.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gplincc/benchmarks.hpp"
#include "gplincc/csv_io.hpp"
#include "gplincc/design.hpp"
#include "gplincc/diagnostics.hpp"
#include "gplincc/hyperfit.hpp"
#include "gplincc/linearize.hpp"
#include "gplincc/parallel.hpp"
#include "gplincc/posterior.hpp"
#include "gplincc/predictive.hpp"
#include "gplincc/rng.hpp"
#include "gplincc/types.hpp"

namespace fs = std::filesystem;
using namespace gplincc;

namespace {

// Seed roles derived from one base seed; stage s of task t uses base + offset.
enum SeedRole : std::uint64_t {
  kSeedObs = 0,
  kSeedDesign = 1,
  kSeedFit = 2,
  kSeedCoverage = 3,
  kSeedBundle = 4,
  kSeedMixture = 5,
  kSeedRolesPerTask = 8,
};

using ManifestEntries = std::vector<std::pair<std::string, std::string>>;

void write_manifest(const fs::path& dir, const std::string& subcommand,
                    const ManifestEntries& entries) {
  const fs::path path = dir / "manifest.cfg";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot write " + path.string());
  out << "# replay: gplincc " << subcommand
      << " --config " << path.filename().string() << " [--out DIR]\n";
  out << '[' << subcommand << "]\n";
  for (const auto& [key, value] : entries) out << key << '=' << value << '\n';
  if (!out) throw std::invalid_argument("write failed for " + path.string());
}

std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

// Exact coefficients wrapped as a fitted linear model with zero intercepts.
LinearizedModel exact_model(const Benchmark& bench, const Eigen::MatrixXd& design) {
  LinearizedModel model;
  model.zero_intercept = true;
  for (Eigen::Index j = 0; j < design.rows(); ++j) {
    model.slope.push_back(bench.coefficients(design(j, 0)));
    model.intercept.push_back(Eigen::VectorXd::Zero(bench.n()));
    model.residual_var.push_back(Eigen::VectorXd::Zero(bench.n()));
  }
  return model;
}

Eigen::MatrixXd grid_over(const LambdaDistribution& dist, int k) {
  if (dist.dim() != 1)
    throw std::invalid_argument("benchmark grids are one-dimensional");
  if (k == 1) return Eigen::MatrixXd::Constant(1, 1, 0.5 * (dist.lower[0] + dist.upper[0]));
  return Eigen::VectorXd::LinSpaced(k, dist.lower[0], dist.upper[0]);
}

// Point-major stacked mean rearranged to one row per point.
Eigen::MatrixXd unstack(const Eigen::VectorXd& stacked, int k, int p) {
  Eigen::MatrixXd out(k, p);
  for (int i = 0; i < k; ++i)
    for (int u = 0; u < p; ++u) out(i, u) = stacked[i * p + u];
  return out;
}

std::vector<csv::MseRow> mse_rows(const std::string& estimator, const Eigen::VectorXd& mse) {
  std::vector<csv::MseRow> rows;
  for (int u = 0; u < mse.size(); ++u)
    rows.push_back({estimator, u + 1, mse[u]});
  return rows;
}

struct FitStage {
  CalibrationMatrices calib;
  FitResult fit;
};

FitStage fit_stage(const Eigen::MatrixXd& design, const LinearizedModel& model,
                   const ObservationSet& obs, int multistarts, int max_evals,
                   std::uint64_t seed, int workers) {
  FitStage stage;
  stage.calib = assemble_calibration_matrices(model, obs);
  OptimizerConfig cfg;
  cfg.multistarts = multistarts;
  cfg.max_evals = max_evals;
  cfg.seed = seed;
  cfg.workers = workers;
  stage.fit = fit_hyperparameters(make_marginal_data(design, stage.calib), cfg);
  return stage;
}

// ---------------------------------------------------------------- example --

struct ExampleOptions {
  int example = 1;
  int n = 50;
  int m = 10;
  int k = 500;
  double lambda0 = 0.5;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  int pairs = 5000;
  int simulations = 0;
  int n_lambda = 9;
  int mixture_draws = 200;
  int multistarts = 10;
  int max_evals = 2000;
  int workers = default_workers();
  std::string out;
};

void run_example(const ExampleOptions& opt) {
  const fs::path dir(opt.out);
  fs::create_directories(dir);
  auto at = [&](const char* name) { return (dir / name).string(); };

  const Benchmark bench =
      make_example(opt.example, opt.n, derive_seed(opt.seed, kSeedObs), opt.lambda0);
  const DesignSet design = lhs_uniform(opt.m, bench.lambda_dist, derive_seed(opt.seed, kSeedDesign));
  csv::write_design(at("design.csv"), design.points);
  csv::write_observations(at("observations.csv"), bench.obs);

  LinearizedModel model;
  if (opt.simulations > 0) {
    const SimulationBundle bundle =
        simulate_bundle(bench, design.points, opt.simulations, derive_seed(opt.seed, kSeedBundle));
    csv::write_bundle(at("simulations.csv"), bundle);
    model = fit_linear_coefficients(bundle);
  } else {
    model = exact_model(bench, design.points);
  }
  csv::write_coefficients(at("coefficients.csv"), model);

  const FitStage stage = fit_stage(design.points, model, bench.obs, opt.multistarts,
                                   opt.max_evals, derive_seed(opt.seed, kSeedFit), opt.workers);
  csv::write_hyper(at("hyper.csv"), stage.fit.hyper);
  csv::write_fit_trace(at("hyperfit.csv"), stage.fit.trace, bench.p, 1);

  const GpPredictor engine(design.points, stage.fit.hyper, stage.calib);
  csv::write_gaussian(at("posterior_mean.csv"), at("posterior_cov.csv"), engine.posterior());

  const Eigen::MatrixXd grid = grid_over(bench.lambda_dist, opt.k);
  const MarginalPrediction pred = engine.predict_marginal(grid, 256, opt.workers);
  csv::write_predictions(at("predictions.csv"), pred);

  const std::vector<Eigen::MatrixXd> g_grid = bench.coefficients_at(grid);
  const GaussianDist flat = target_jeffreys(grid, g_grid, bench.obs);
  csv::write_predictions(at("targets_jeffreys.csv"), grid, flat, bench.p);
  const GaussianDist smooth = target_gp(grid, g_grid, bench.obs, stage.fit.hyper);
  csv::write_predictions(at("targets_gp.csv"), grid, smooth, bench.p);

  const Eigen::MatrixXd truth = bench.true_theta_at(grid);
  std::vector<csv::MseRow> mse;
  auto add_mse = [&](const std::string& name, const Eigen::VectorXd& stacked) {
    const auto rows = mse_rows(name, mse_per_component(truth, unstack(stacked, opt.k, bench.p)));
    mse.insert(mse.end(), rows.begin(), rows.end());
  };
  add_mse("pred", pred.mean);
  add_mse("target", flat.mean);
  add_mse("targetGP", smooth.mean);
  csv::write_mse(at("mse.csv"), mse);

  if (opt.example == 3) {
    CalibrationSetup setup;
    setup.design = design.points;
    setup.g_at_design = model.slope;
    setup.obs = bench.obs;
    setup.hyper = stage.fit.hyper;
    setup.coefficients = bench.coefficient_fn();
    std::vector<int> indices(opt.n);
    for (int i = 0; i < opt.n; ++i) indices[i] = i;
    const CoverageReport report =
        compensation_coverage(setup, opt.alpha, indices, opt.pairs, bench.lambda_dist,
                              derive_seed(opt.seed, kSeedCoverage), opt.workers);
    csv::write_coverage(at("coverage.csv"), report);

    // predictive density of the model output at a short grid of inputs
    std::vector<csv::OutputDensityRow> density;
    const Eigen::MatrixXd lambdas = grid_over(bench.lambda_dist, opt.n_lambda);
    for (Eigen::Index t = 0; t < lambdas.rows(); ++t) {
      const PredictiveTheta theta = engine.predict(lambdas.row(t));
      const Eigen::MatrixXd g = bench.coefficients(lambdas(t, 0));
      const GaussianDist output = model_output_predictive(g, theta.mean, theta.cov);
      for (int i = 0; i < bench.n(); ++i)
        density.push_back({lambdas(t, 0), i + 1, bench.obs.x[i], output.mean[i],
                           output.cov(i, i)});
    }
    csv::write_output_density(at("output_density.csv"), density);

    // draws from the input-averaged output predictive
    SplitMix64 rng(derive_seed(opt.seed, kSeedMixture));
    std::vector<csv::MixtureSampleRow> samples;
    samples.reserve(static_cast<std::size_t>(opt.mixture_draws) * bench.n());
    for (int t = 0; t < opt.mixture_draws; ++t) {
      const double lambda = rng.next_uniform(bench.lambda_dist.lower[0], bench.lambda_dist.upper[0]);
      const PredictiveTheta theta = engine.predict(Eigen::MatrixXd::Constant(1, 1, lambda));
      const double sd = std::sqrt(std::max(theta.cov(0, 0), 0.0));
      const double draw = theta.mean[0] + sd * rng.next_normal();
      const Eigen::MatrixXd g = bench.coefficients(lambda);
      for (int i = 0; i < bench.n(); ++i)
        samples.push_back({i + 1, t + 1, g(i, 0) * draw});
    }
    csv::write_mixture_samples(at("mixture_samples.csv"), samples);
  }

  write_manifest(dir, "example",
                 {{"example", std::to_string(opt.example)},
                  {"n", std::to_string(opt.n)},
                  {"m", std::to_string(opt.m)},
                  {"k", std::to_string(opt.k)},
                  {"lambda0", csv::format_double(opt.lambda0)},
                  {"seed", fmt_u64(opt.seed)},
                  {"alpha", csv::format_double(opt.alpha)},
                  {"pairs", std::to_string(opt.pairs)},
                  {"simulations", std::to_string(opt.simulations)},
                  {"n-lambda", std::to_string(opt.n_lambda)},
                  {"mixture-draws", std::to_string(opt.mixture_draws)},
                  {"multistarts", std::to_string(opt.multistarts)},
                  {"max-evals", std::to_string(opt.max_evals)},
                  {"out", opt.out}});
}

// -------------------------------------------------------------- replicate --

struct ReplicateOptions {
  int example = 1;
  std::vector<int> n_set = {50, 100};
  std::vector<int> m_set = {10, 15, 20};
  int reps = 100;
  int k = 200;
  double lambda0 = 0.5;
  std::uint64_t seed = 0;
  int multistarts = 10;
  int max_evals = 2000;
  int workers = default_workers();
  std::string out;
};

void run_replicate(const ReplicateOptions& opt) {
  const fs::path dir(opt.out);
  fs::create_directories(dir);

  struct Task {
    int n = 0, m = 0, rep = 0;
    std::uint64_t task_id = 0;
  };
  std::vector<Task> tasks;
  std::uint64_t task_id = 0;
  for (const int n : opt.n_set)
    for (const int m : opt.m_set)
      for (int rep = 1; rep <= opt.reps; ++rep) tasks.push_back({n, m, rep, task_id++});

  std::vector<std::vector<csv::ReplicateRow>> slots(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), opt.workers, [&](int t) {
    const Task& task = tasks[static_cast<std::size_t>(t)];
    const std::uint64_t base = derive_seed(opt.seed, task.task_id * kSeedRolesPerTask);
    auto& rows = slots[static_cast<std::size_t>(t)];
    auto emit = [&](const std::string& estimator, const Eigen::VectorXd& mse,
                    const std::string& status) {
      for (int u = 0; u < mse.size(); ++u)
        rows.push_back({opt.example, task.n, task.m, task.rep, estimator, u + 1, mse[u], status});
    };
    try {
      const Benchmark bench =
          make_example(opt.example, task.n, derive_seed(base, kSeedObs), opt.lambda0);
      const DesignSet design =
          lhs_uniform(task.m, bench.lambda_dist, derive_seed(base, kSeedDesign));
      const LinearizedModel model = exact_model(bench, design.points);
      const FitStage stage = fit_stage(design.points, model, bench.obs, opt.multistarts,
                                       opt.max_evals, derive_seed(base, kSeedFit), 1);
      const GpPredictor engine(design.points, stage.fit.hyper, stage.calib);
      const Eigen::MatrixXd grid = grid_over(bench.lambda_dist, opt.k);
      const Eigen::MatrixXd truth = bench.true_theta_at(grid);
      const std::vector<Eigen::MatrixXd> g_grid = bench.coefficients_at(grid);

      const MarginalPrediction pred = engine.predict_marginal(grid, 256, 1);
      emit("pred", mse_per_component(truth, unstack(pred.mean, opt.k, bench.p)), "ok");
      const GaussianDist flat = target_jeffreys(grid, g_grid, bench.obs);
      emit("target", mse_per_component(truth, unstack(flat.mean, opt.k, bench.p)), "ok");
      const GaussianDist smooth = target_gp(grid, g_grid, bench.obs, stage.fit.hyper);
      emit("targetGP", mse_per_component(truth, unstack(smooth.mean, opt.k, bench.p)), "ok");
    } catch (const std::exception&) {
      rows.clear();
      const int p = opt.example == 2 ? 2 : 1;
      const Eigen::VectorXd nan =
          Eigen::VectorXd::Constant(p, std::numeric_limits<double>::quiet_NaN());
      for (const char* estimator : {"pred", "target", "targetGP"})
        emit(estimator, nan, "failed");
    }
  });

  std::vector<csv::ReplicateRow> table;
  for (const auto& rows : slots) table.insert(table.end(), rows.begin(), rows.end());
  csv::write_replicate_table((dir / "mse_table.csv").string(), table);

  std::string n_list, m_list;
  for (const int n : opt.n_set) n_list += (n_list.empty() ? "" : " ") + std::to_string(n);
  for (const int m : opt.m_set) m_list += (m_list.empty() ? "" : " ") + std::to_string(m);
  write_manifest(dir, "replicate",
                 {{"example", std::to_string(opt.example)},
                  {"n", n_list},
                  {"m", m_list},
                  {"reps", std::to_string(opt.reps)},
                  {"k", std::to_string(opt.k)},
                  {"lambda0", csv::format_double(opt.lambda0)},
                  {"seed", fmt_u64(opt.seed)},
                  {"multistarts", std::to_string(opt.multistarts)},
                  {"max-evals", std::to_string(opt.max_evals)},
                  {"out", opt.out}});
}

// -------------------------------------------- fit / predict / diagnose ----

struct FileInputs {
  std::string design;
  std::string observations;
  std::string coefficients;
  std::string hyper;
};

struct FitOptions {
  FileInputs in;
  std::uint64_t seed = 0;
  int multistarts = 10;
  int max_evals = 2000;
  int workers = default_workers();
  std::string out;
};

void run_fit(const FitOptions& opt) {
  const fs::path dir(opt.out);
  fs::create_directories(dir);
  const Eigen::MatrixXd design = csv::read_design(opt.in.design);
  const ObservationSet obs = csv::read_observations(opt.in.observations);
  const LinearizedModel model = csv::read_coefficients(opt.in.coefficients);
  const FitStage stage = fit_stage(design, model, obs, opt.multistarts, opt.max_evals,
                                   derive_seed(opt.seed, kSeedFit), opt.workers);
  csv::write_hyper((dir / "hyper.csv").string(), stage.fit.hyper);
  csv::write_fit_trace((dir / "hyperfit.csv").string(), stage.fit.trace, model.p(),
                       static_cast<int>(design.cols()));
  const GpPredictor engine(design, stage.fit.hyper, stage.calib);
  csv::write_gaussian((dir / "posterior_mean.csv").string(),
                      (dir / "posterior_cov.csv").string(), engine.posterior());
  write_manifest(dir, "fit",
                 {{"design", opt.in.design},
                  {"observations", opt.in.observations},
                  {"coefficients", opt.in.coefficients},
                  {"seed", fmt_u64(opt.seed)},
                  {"multistarts", std::to_string(opt.multistarts)},
                  {"max-evals", std::to_string(opt.max_evals)},
                  {"out", opt.out}});
}

struct PredictOptions {
  FileInputs in;
  int k = 500;
  std::vector<double> lower;
  std::vector<double> upper;
  std::uint64_t seed = 0;
  int workers = default_workers();
  std::string out;
};

void run_predict(const PredictOptions& opt) {
  const fs::path dir(opt.out);
  fs::create_directories(dir);
  const Eigen::MatrixXd design = csv::read_design(opt.in.design);
  const ObservationSet obs = csv::read_observations(opt.in.observations);
  const LinearizedModel model = csv::read_coefficients(opt.in.coefficients);
  const HyperParams hyper = csv::read_hyper(opt.in.hyper);

  const int q = static_cast<int>(design.cols());
  LambdaDistribution box;
  if (opt.lower.empty() && opt.upper.empty()) {
    box.lower = design.colwise().minCoeff().transpose();
    box.upper = design.colwise().maxCoeff().transpose();
  } else {
    if (static_cast<int>(opt.lower.size()) != q || static_cast<int>(opt.upper.size()) != q)
      throw std::invalid_argument("predict: bounds must list one value per input dimension");
    box.lower = Eigen::Map<const Eigen::VectorXd>(opt.lower.data(), q);
    box.upper = Eigen::Map<const Eigen::VectorXd>(opt.upper.data(), q);
  }
  box.validate();
  const Eigen::MatrixXd grid =
      q == 1 ? grid_over(box, opt.k) : lhs_uniform(opt.k, box, opt.seed).points;

  const GpPredictor engine(design, hyper, assemble_calibration_matrices(model, obs));
  const MarginalPrediction pred = engine.predict_marginal(grid, 256, opt.workers);
  csv::write_predictions((dir / "predictions.csv").string(), pred);

  std::string lo_list, hi_list;
  for (int d = 0; d < box.lower.size(); ++d) {
    lo_list += (d ? " " : "") + csv::format_double(box.lower[d]);
    hi_list += (d ? " " : "") + csv::format_double(box.upper[d]);
  }
  write_manifest(dir, "predict",
                 {{"design", opt.in.design},
                  {"observations", opt.in.observations},
                  {"coefficients", opt.in.coefficients},
                  {"hyper", opt.in.hyper},
                  {"k", std::to_string(opt.k)},
                  {"lower", lo_list},
                  {"upper", hi_list},
                  {"seed", fmt_u64(opt.seed)},
                  {"out", opt.out}});
}

struct DiagnoseOptions {
  FileInputs in;
  int example = 3;  // analytic coefficients for pair sampling
  double lambda0 = 0.5;
  double alpha = 0.05;
  int pairs = 5000;
  std::uint64_t seed = 0;
  int workers = default_workers();
  std::string out;
};

void run_diagnose(const DiagnoseOptions& opt) {
  const fs::path dir(opt.out);
  fs::create_directories(dir);
  const Eigen::MatrixXd design = csv::read_design(opt.in.design);
  const ObservationSet obs = csv::read_observations(opt.in.observations);
  const LinearizedModel model = csv::read_coefficients(opt.in.coefficients);

  // pair sampling needs coefficients at arbitrary inputs, which only the
  // analytic problems provide; the benchmark must match the observation count
  const Benchmark bench = make_example(opt.example, obs.size(), 0, opt.lambda0);

  CalibrationSetup setup;
  setup.design = design;
  setup.g_at_design = model.slope;
  setup.obs = obs;
  setup.hyper = csv::read_hyper(opt.in.hyper);
  setup.coefficients = bench.coefficient_fn();
  std::vector<int> indices(obs.size());
  for (int i = 0; i < obs.size(); ++i) indices[i] = i;

  const CoverageReport report =
      compensation_coverage(setup, opt.alpha, indices, opt.pairs, bench.lambda_dist,
                            derive_seed(opt.seed, kSeedCoverage), opt.workers);
  csv::write_coverage((dir / "coverage.csv").string(), report);
  write_manifest(dir, "diagnose",
                 {{"design", opt.in.design},
                  {"observations", opt.in.observations},
                  {"coefficients", opt.in.coefficients},
                  {"hyper", opt.in.hyper},
                  {"example", std::to_string(opt.example)},
                  {"lambda0", csv::format_double(opt.lambda0)},
                  {"alpha", csv::format_double(opt.alpha)},
                  {"pairs", std::to_string(opt.pairs)},
                  {"seed", fmt_u64(opt.seed)},
                  {"out", opt.out}});
}

// ------------------------------------------------- design / linearize -----

struct DesignOptions {
  int m = 10;
  std::vector<double> lower = {0.0};
  std::vector<double> upper = {1.0};
  std::uint64_t seed = 0;
  std::string out_file;
};

void run_design(const DesignOptions& opt) {
  if (opt.lower.size() != opt.upper.size())
    throw std::invalid_argument("design: bounds must have equal lengths");
  LambdaDistribution box;
  box.lower = Eigen::Map<const Eigen::VectorXd>(opt.lower.data(),
                                                static_cast<Eigen::Index>(opt.lower.size()));
  box.upper = Eigen::Map<const Eigen::VectorXd>(opt.upper.data(),
                                                static_cast<Eigen::Index>(opt.upper.size()));
  box.validate();
  csv::write_design(opt.out_file, lhs_uniform(opt.m, box, opt.seed).points);
}

struct LinearizeOptions {
  std::string simulations;
  bool zero_intercept = false;
  std::string out_file;
};

void run_linearize(const LinearizeOptions& opt) {
  const SimulationBundle bundle = csv::read_bundle(opt.simulations);
  csv::write_coefficients(opt.out_file, fit_linear_coefficients(bundle, opt.zero_intercept));
}

// ----------------------------------------------------------------- wiring --

void add_fit_flags(CLI::App* cmd, int& multistarts, int& max_evals) {
  cmd->add_option("--multistarts", multistarts, "Optimizer restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-evals", max_evals, "Objective evaluations per restart")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_input_flags(CLI::App* cmd, FileInputs& in, bool with_hyper) {
  cmd->add_option("--design", in.design, "design.csv path")->required();
  cmd->add_option("--observations", in.observations, "observations.csv path")->required();
  cmd->add_option("--coefficients", in.coefficients, "coefficients.csv path")->required();
  if (with_hyper) cmd->add_option("--hyper", in.hyper, "hyper.csv path")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calibration-function estimation pipelines (CSV in, CSV out)"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Manifest to replay (sectioned key=value lines)");

  ExampleOptions ex;
  auto* example_cmd = app.add_subcommand("example", "Run one benchmark problem end to end");
  example_cmd->fallthrough();
  example_cmd->add_option("--example", ex.example, "Benchmark problem id")
      ->check(CLI::Range(1, 3))
      ->envname("GPLINCC_EXAMPLE")
      ->capture_default_str();
  example_cmd->add_option("--n", ex.n, "Observations")->check(CLI::PositiveNumber)
      ->envname("GPLINCC_N")->capture_default_str();
  example_cmd->add_option("--m", ex.m, "Design points")->check(CLI::PositiveNumber)
      ->envname("GPLINCC_M")->capture_default_str();
  example_cmd->add_option("--k", ex.k, "Prediction grid size")->check(CLI::PositiveNumber)
      ->envname("GPLINCC_K")->capture_default_str();
  example_cmd->add_option("--lambda0", ex.lambda0, "Generating input (problem 3)")
      ->capture_default_str();
  example_cmd->add_option("--seed", ex.seed, "Base seed")->envname("GPLINCC_SEED")
      ->capture_default_str();
  example_cmd->add_option("--alpha", ex.alpha, "Interval miss level")
      ->check(CLI::Range(1e-12, 0.999999))->envname("GPLINCC_ALPHA")->capture_default_str();
  example_cmd->add_option("--pairs", ex.pairs, "Sampled input pairs per held-out point")
      ->check(CLI::PositiveNumber)->envname("GPLINCC_PAIRS")->capture_default_str();
  example_cmd->add_option("--simulations", ex.simulations,
                          "Runs per cell for coefficient estimation (0 = exact coefficients)")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  example_cmd->add_option("--n-lambda", ex.n_lambda, "Inputs in the output-density table")
      ->check(CLI::PositiveNumber)->capture_default_str();
  example_cmd->add_option("--mixture-draws", ex.mixture_draws,
                          "Draws from the input-averaged output predictive")
      ->check(CLI::PositiveNumber)->capture_default_str();
  add_fit_flags(example_cmd, ex.multistarts, ex.max_evals);
  example_cmd->add_option("--workers", ex.workers, "Worker threads")
      ->check(CLI::PositiveNumber)->envname("GPLINCC_WORKERS")->capture_default_str();
  example_cmd->add_option("--out", ex.out, "Artifact directory")->required()
      ->envname("GPLINCC_OUT");

  ReplicateOptions rep;
  auto* replicate_cmd = app.add_subcommand("replicate", "Replicated error study over (n, m)");
  replicate_cmd->fallthrough();
  replicate_cmd->add_option("--example", rep.example, "Benchmark problem id")
      ->check(CLI::Range(1, 3))->envname("GPLINCC_EXAMPLE")->capture_default_str();
  replicate_cmd->add_option("--n", rep.n_set, "Observation counts")->delimiter(',')
      ->check(CLI::PositiveNumber)->envname("GPLINCC_N")->capture_default_str();
  replicate_cmd->add_option("--m", rep.m_set, "Design sizes")->delimiter(',')
      ->check(CLI::PositiveNumber)->envname("GPLINCC_M")->capture_default_str();
  replicate_cmd->add_option("--reps", rep.reps, "Replications per (n, m)")
      ->check(CLI::PositiveNumber)->envname("GPLINCC_REPS")->capture_default_str();
  replicate_cmd->add_option("--k", rep.k, "Error-evaluation grid size")
      ->check(CLI::PositiveNumber)->envname("GPLINCC_K")->capture_default_str();
  replicate_cmd->add_option("--lambda0", rep.lambda0, "Generating input (problem 3)")
      ->capture_default_str();
  replicate_cmd->add_option("--seed", rep.seed, "Base seed")->envname("GPLINCC_SEED")
      ->capture_default_str();
  add_fit_flags(replicate_cmd, rep.multistarts, rep.max_evals);
  replicate_cmd->add_option("--workers", rep.workers, "Worker threads")
      ->check(CLI::PositiveNumber)->envname("GPLINCC_WORKERS")->capture_default_str();
  replicate_cmd->add_option("--out", rep.out, "Artifact directory")->required()
      ->envname("GPLINCC_OUT");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit hyperparameters from CSV inputs");
  fit_cmd->fallthrough();
  add_input_flags(fit_cmd, fit.in, false);
  fit_cmd->add_option("--seed", fit.seed, "Base seed")->envname("GPLINCC_SEED")
      ->capture_default_str();
  add_fit_flags(fit_cmd, fit.multistarts, fit.max_evals);
  fit_cmd->add_option("--workers", fit.workers, "Worker threads")
      ->check(CLI::PositiveNumber)->envname("GPLINCC_WORKERS")->capture_default_str();
  fit_cmd->add_option("--out", fit.out, "Artifact directory")->required()
      ->envname("GPLINCC_OUT");

  PredictOptions pr;
  auto* predict_cmd = app.add_subcommand("predict", "Evaluate the predictive on a grid");
  predict_cmd->fallthrough();
  add_input_flags(predict_cmd, pr.in, true);
  predict_cmd->add_option("--k", pr.k, "Prediction grid size")->check(CLI::PositiveNumber)
      ->envname("GPLINCC_K")->capture_default_str();
  predict_cmd->add_option("--lower", pr.lower, "Grid lower bounds (default: design range)")
      ->delimiter(',');
  predict_cmd->add_option("--upper", pr.upper, "Grid upper bounds (default: design range)")
      ->delimiter(',');
  predict_cmd->add_option("--seed", pr.seed, "Seed for space-filling grids (dim > 1)")
      ->envname("GPLINCC_SEED")->capture_default_str();
  predict_cmd->add_option("--workers", pr.workers, "Worker threads")
      ->check(CLI::PositiveNumber)->envname("GPLINCC_WORKERS")->capture_default_str();
  predict_cmd->add_option("--out", pr.out, "Artifact directory")->required()
      ->envname("GPLINCC_OUT");

  DiagnoseOptions diag;
  auto* diagnose_cmd =
      app.add_subcommand("diagnose", "Interchangeability coverage from CSV inputs");
  diagnose_cmd->fallthrough();
  add_input_flags(diagnose_cmd, diag.in, true);
  diagnose_cmd->add_option("--example", diag.example,
                           "Benchmark supplying analytic coefficients for sampled inputs")
      ->check(CLI::Range(1, 3))->envname("GPLINCC_EXAMPLE")->capture_default_str();
  diagnose_cmd->add_option("--lambda0", diag.lambda0, "Generating input (problem 3)")
      ->capture_default_str();
  diagnose_cmd->add_option("--alpha", diag.alpha, "Interval miss level")
      ->check(CLI::Range(1e-12, 0.999999))->envname("GPLINCC_ALPHA")->capture_default_str();
  diagnose_cmd->add_option("--pairs", diag.pairs, "Sampled input pairs per held-out point")
      ->check(CLI::PositiveNumber)->envname("GPLINCC_PAIRS")->capture_default_str();
  diagnose_cmd->add_option("--seed", diag.seed, "Base seed")->envname("GPLINCC_SEED")
      ->capture_default_str();
  diagnose_cmd->add_option("--workers", diag.workers, "Worker threads")
      ->check(CLI::PositiveNumber)->envname("GPLINCC_WORKERS")->capture_default_str();
  diagnose_cmd->add_option("--out", diag.out, "Artifact directory")->required()
      ->envname("GPLINCC_OUT");

  DesignOptions des;
  auto* design_cmd = app.add_subcommand("design", "Write a space-filling design CSV");
  design_cmd->fallthrough();
  design_cmd->add_option("--m", des.m, "Design points")->check(CLI::PositiveNumber)
      ->envname("GPLINCC_M")->capture_default_str();
  design_cmd->add_option("--lower", des.lower, "Box lower bounds")->delimiter(',')
      ->capture_default_str();
  design_cmd->add_option("--upper", des.upper, "Box upper bounds")->delimiter(',')
      ->capture_default_str();
  design_cmd->add_option("--seed", des.seed, "Seed")->envname("GPLINCC_SEED")
      ->capture_default_str();
  design_cmd->add_option("--out-file", des.out_file, "Output CSV path")->required();

  LinearizeOptions lin;
  auto* linearize_cmd =
      app.add_subcommand("linearize", "Fit per-cell linear coefficients from simulation runs");
  linearize_cmd->fallthrough();
  linearize_cmd->add_option("--simulations", lin.simulations, "simulations.csv path")
      ->required();
  linearize_cmd->add_flag("--zero-intercept", lin.zero_intercept,
                          "Force the fitted intercepts to zero");
  linearize_cmd->add_option("--out-file", lin.out_file, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*example_cmd) run_example(ex);
    if (*replicate_cmd) run_replicate(rep);
    if (*fit_cmd) run_fit(fit);
    if (*predict_cmd) run_predict(pr);
    if (*diagnose_cmd) run_diagnose(diag);
    if (*design_cmd) run_design(des);
    if (*linearize_cmd) run_linearize(lin);
    return 0;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
