#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "gplincc/diagnostics.hpp"
#include "gplincc/hyperfit.hpp"
#include "gplincc/linearize.hpp"
#include "gplincc/posterior.hpp"
#include "gplincc/predictive.hpp"
#include "gplincc/types.hpp"

// CSV persistence for every pipeline artifact.  Numbers are written with 17
// significant digits ('.' separator, no locale), which round-trips doubles
// exactly; all *_index columns are 1-based.
namespace gplincc::csv {

std::string format_double(double value);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_table(const std::string& path, const Table& table);
Table read_table(const std::string& path);

// design.csv: lambda_1..lambda_q
void write_design(const std::string& path, const Eigen::MatrixXd& points);
Eigen::MatrixXd read_design(const std::string& path);

// observations.csv: x_index,x,z,var
void write_observations(const std::string& path, const ObservationSet& obs);
ObservationSet read_observations(const std::string& path);

// coefficients.csv: lambda_index,x_index,g0,g1_1..g1_p
void write_coefficients(const std::string& path, const std::vector<Eigen::VectorXd>& intercept,
                        const std::vector<Eigen::MatrixXd>& slope);
void write_coefficients(const std::string& path, const LinearizedModel& model);
LinearizedModel read_coefficients(const std::string& path);

// simulations.csv: lambda_index,x_index,theta_1..theta_p,y (one row per run)
void write_bundle(const std::string& path, const SimulationBundle& bundle);
SimulationBundle read_bundle(const std::string& path);

// hyper.csv: component,beta,sigma2,psi_1..psi_q
void write_hyper(const std::string& path, const HyperParams& hyper);
HyperParams read_hyper(const std::string& path);

// hyperfit.csv: start,eval,log_sigma2_1..p,log_psi_1_1..p_q,nll
void write_fit_trace(const std::string& path, const std::vector<TraceEntry>& trace, int p, int q);

// posterior_mean.csv: index,mean / posterior_cov.csv: row,col,value
void write_gaussian(const std::string& mean_path, const std::string& cov_path,
                    const GaussianDist& dist);
GaussianDist read_gaussian(const std::string& mean_path, const std::string& cov_path);

// predictions.csv: lambda_1..lambda_q,comp,mean,var,ci_lo,ci_hi
// with ci = mean +/- 1.959964 * sd (95% normal band).
struct PredictionTable {
  Eigen::MatrixXd points;  // one row per (point, component) entry's input
  Eigen::VectorXi comp;    // 1-based component ids
  Eigen::VectorXd mean, var, ci_lo, ci_hi;
};
void write_predictions(const std::string& path, const MarginalPrediction& pred);
void write_predictions(const std::string& path, const Eigen::MatrixXd& points,
                       const GaussianDist& dist, int p);
PredictionTable read_predictions(const std::string& path);

// coverage.csv: x_index,x_value,alpha,N,coverage
void write_coverage(const std::string& path, const CoverageReport& report);
CoverageReport read_coverage(const std::string& path);

// mse.csv: estimator,component,mse
struct MseRow {
  std::string estimator;
  int component = 1;
  double mse = 0.0;
};
void write_mse(const std::string& path, const std::vector<MseRow>& rows);
std::vector<MseRow> read_mse(const std::string& path);

// mse_table.csv: example,n,m,rep,estimator,component,mse,status
struct ReplicateRow {
  int example = 0, n = 0, m = 0, rep = 0;
  std::string estimator;
  int component = 1;
  double mse = 0.0;
  std::string status = "ok";
};
void write_replicate_table(const std::string& path, const std::vector<ReplicateRow>& rows);
std::vector<ReplicateRow> read_replicate_table(const std::string& path);

// output_density.csv: lambda,x_index,x,mean,var
struct OutputDensityRow {
  double lambda = 0.0;
  int x_index = 1;
  double x = 0.0, mean = 0.0, var = 0.0;
};
void write_output_density(const std::string& path, const std::vector<OutputDensityRow>& rows);

// mixture_samples.csv: x_index,draw,value
struct MixtureSampleRow {
  int x_index = 1, draw = 1;
  double value = 0.0;
};
void write_mixture_samples(const std::string& path, const std::vector<MixtureSampleRow>& rows);

}  // namespace gplincc::csv
