#include "gplincc/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

namespace gplincc::csv {

namespace {

constexpr double kBand95 = 1.959964;

double parse_double(const std::string& cell) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw std::invalid_argument("csv: malformed number '" + cell + "'");
  return value;
}

int parse_int(const std::string& cell) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw std::invalid_argument("csv: malformed integer '" + cell + "'");
  return value;
}

std::string format_int(long long value) { return std::to_string(value); }

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

void expect_header(const Table& table, const std::vector<std::string>& expected,
                   const std::string& path) {
  if (table.header != expected)
    throw std::invalid_argument("csv: unexpected header in " + path);
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::invalid_argument("csv: unformattable number");
  return std::string(buffer, ptr);
}

void write_table(const std::string& path, const Table& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument("csv: cannot open " + path + " for writing");
  for (std::size_t c = 0; c < table.header.size(); ++c)
    out << (c ? "," : "") << table.header[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
  if (!out) throw std::invalid_argument("csv: write failed for " + path);
}

Table read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("csv: cannot open " + path);
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split_line(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != table.header.size())
      throw std::invalid_argument("csv: ragged row in " + path);
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void write_design(const std::string& path, const Eigen::MatrixXd& points) {
  Table table;
  for (Eigen::Index d = 0; d < points.cols(); ++d)
    table.header.push_back("lambda_" + format_int(d + 1));
  for (Eigen::Index j = 0; j < points.rows(); ++j) {
    std::vector<std::string> row;
    for (Eigen::Index d = 0; d < points.cols(); ++d) row.push_back(format_double(points(j, d)));
    table.rows.push_back(std::move(row));
  }
  write_table(path, table);
}

Eigen::MatrixXd read_design(const std::string& path) {
  const Table table = read_table(path);
  const int q = static_cast<int>(table.header.size());
  for (int d = 0; d < q; ++d) {
    if (table.header[d] != "lambda_" + format_int(d + 1))
      throw std::invalid_argument("csv: unexpected header in " + path);
  }
  Eigen::MatrixXd points(static_cast<Eigen::Index>(table.rows.size()), q);
  for (std::size_t j = 0; j < table.rows.size(); ++j)
    for (int d = 0; d < q; ++d) points(static_cast<Eigen::Index>(j), d) = parse_double(table.rows[j][d]);
  return points;
}

void write_observations(const std::string& path, const ObservationSet& obs) {
  Table table;
  table.header = {"x_index", "x", "z", "var"};
  const Eigen::VectorXd var = obs.total_var();
  for (int i = 0; i < obs.size(); ++i)
    table.rows.push_back({format_int(i + 1), format_double(obs.x[i]), format_double(obs.z[i]),
                          format_double(var[i])});
  write_table(path, table);
}

ObservationSet read_observations(const std::string& path) {
  const Table table = read_table(path);
  expect_header(table, {"x_index", "x", "z", "var"}, path);
  const int n = static_cast<int>(table.rows.size());
  ObservationSet obs;
  obs.x.resize(n);
  obs.z.resize(n);
  obs.noise_var.resize(n);
  for (int i = 0; i < n; ++i) {
    if (parse_int(table.rows[i][0]) != i + 1)
      throw std::invalid_argument("csv: x_index out of order in " + path);
    obs.x[i] = parse_double(table.rows[i][1]);
    obs.z[i] = parse_double(table.rows[i][2]);
    obs.noise_var[i] = parse_double(table.rows[i][3]);
  }
  obs.validate();
  return obs;
}

void write_coefficients(const std::string& path, const std::vector<Eigen::VectorXd>& intercept,
                        const std::vector<Eigen::MatrixXd>& slope) {
  if (slope.empty()) throw std::invalid_argument("csv: no coefficient blocks");
  const int p = static_cast<int>(slope[0].cols());
  Table table;
  table.header = {"lambda_index", "x_index", "g0"};
  for (int u = 0; u < p; ++u) table.header.push_back("g1_" + format_int(u + 1));
  for (std::size_t j = 0; j < slope.size(); ++j) {
    for (Eigen::Index i = 0; i < slope[j].rows(); ++i) {
      std::vector<std::string> row = {format_int(static_cast<long long>(j) + 1),
                                      format_int(i + 1)};
      row.push_back(format_double(intercept.empty() ? 0.0 : intercept[j][i]));
      for (int u = 0; u < p; ++u) row.push_back(format_double(slope[j](i, u)));
      table.rows.push_back(std::move(row));
    }
  }
  write_table(path, table);
}

void write_coefficients(const std::string& path, const LinearizedModel& model) {
  write_coefficients(path, model.zero_intercept ? std::vector<Eigen::VectorXd>{} : model.intercept,
                     model.slope);
}

LinearizedModel read_coefficients(const std::string& path) {
  const Table table = read_table(path);
  if (table.header.size() < 4 || table.header[0] != "lambda_index" ||
      table.header[1] != "x_index" || table.header[2] != "g0")
    throw std::invalid_argument("csv: unexpected header in " + path);
  const int p = static_cast<int>(table.header.size()) - 3;
  int m = 0, n = 0;
  for (const auto& row : table.rows) {
    m = std::max(m, parse_int(row[0]));
    n = std::max(n, parse_int(row[1]));
  }
  if (table.rows.size() != static_cast<std::size_t>(m) * n)
    throw std::invalid_argument("csv: incomplete coefficient grid in " + path);
  LinearizedModel model;
  model.intercept.assign(m, Eigen::VectorXd::Zero(n));
  model.slope.assign(m, Eigen::MatrixXd::Zero(n, p));
  model.residual_var.assign(m, Eigen::VectorXd::Zero(n));
  for (const auto& row : table.rows) {
    const int j = parse_int(row[0]) - 1;
    const int i = parse_int(row[1]) - 1;
    model.intercept[j][i] = parse_double(row[2]);
    for (int u = 0; u < p; ++u) model.slope[j](i, u) = parse_double(row[3 + u]);
  }
  bool any_intercept = false;
  for (const auto& g0 : model.intercept) any_intercept = any_intercept || g0.any();
  model.zero_intercept = !any_intercept;
  return model;
}

void write_bundle(const std::string& path, const SimulationBundle& bundle) {
  bundle.validate();
  Table table;
  table.header = {"lambda_index", "x_index"};
  for (int u = 0; u < bundle.p; ++u) table.header.push_back("theta_" + format_int(u + 1));
  table.header.push_back("y");
  for (int j = 0; j < bundle.m; ++j) {
    for (int i = 0; i < bundle.n; ++i) {
      const int c = bundle.cell(j, i);
      for (int s = 0; s < bundle.n_sim; ++s) {
        std::vector<std::string> row = {format_int(j + 1), format_int(i + 1)};
        for (int u = 0; u < bundle.p; ++u) row.push_back(format_double(bundle.theta[c](s, u)));
        row.push_back(format_double(bundle.y[c][s]));
        table.rows.push_back(std::move(row));
      }
    }
  }
  write_table(path, table);
}

SimulationBundle read_bundle(const std::string& path) {
  const Table table = read_table(path);
  if (table.header.size() < 4 || table.header[0] != "lambda_index" ||
      table.header[1] != "x_index" || table.header.back() != "y")
    throw std::invalid_argument("csv: unexpected header in " + path);
  const int p = static_cast<int>(table.header.size()) - 3;
  int m = 0, n = 0;
  for (const auto& row : table.rows) {
    m = std::max(m, parse_int(row[0]));
    n = std::max(n, parse_int(row[1]));
  }
  if (m == 0 || n == 0 || table.rows.size() % (static_cast<std::size_t>(m) * n) != 0)
    throw std::invalid_argument("csv: incomplete simulation grid in " + path);
  const int n_sim = static_cast<int>(table.rows.size() / (static_cast<std::size_t>(m) * n));
  SimulationBundle bundle;
  bundle.m = m;
  bundle.n = n;
  bundle.p = p;
  bundle.n_sim = n_sim;
  bundle.theta.assign(static_cast<std::size_t>(m) * n, Eigen::MatrixXd::Zero(n_sim, p));
  bundle.y.assign(bundle.theta.size(), Eigen::VectorXd::Zero(n_sim));
  std::vector<int> fill(bundle.theta.size(), 0);
  for (const auto& row : table.rows) {
    const int c = bundle.cell(parse_int(row[0]) - 1, parse_int(row[1]) - 1);
    const int s = fill[c]++;
    if (s >= n_sim) throw std::invalid_argument("csv: uneven simulation cells in " + path);
    for (int u = 0; u < p; ++u) bundle.theta[c](s, u) = parse_double(row[2 + u]);
    bundle.y[c][s] = parse_double(row.back());
  }
  bundle.validate();
  return bundle;
}

void write_hyper(const std::string& path, const HyperParams& hyper) {
  hyper.validate();
  const int q = hyper.kernels[0].dim();
  Table table;
  table.header = {"component", "beta", "sigma2"};
  for (int d = 0; d < q; ++d) table.header.push_back("psi_" + format_int(d + 1));
  for (int u = 0; u < hyper.p(); ++u) {
    std::vector<std::string> row = {format_int(u + 1), format_double(hyper.beta[u]),
                                    format_double(hyper.kernels[u].variance)};
    for (int d = 0; d < q; ++d) row.push_back(format_double(hyper.kernels[u].lengthscales[d]));
    table.rows.push_back(std::move(row));
  }
  write_table(path, table);
}

HyperParams read_hyper(const std::string& path) {
  const Table table = read_table(path);
  if (table.header.size() < 4 || table.header[0] != "component" || table.header[1] != "beta" ||
      table.header[2] != "sigma2")
    throw std::invalid_argument("csv: unexpected header in " + path);
  const int q = static_cast<int>(table.header.size()) - 3;
  const int p = static_cast<int>(table.rows.size());
  HyperParams hyper;
  hyper.beta.resize(p);
  hyper.kernels.resize(p);
  for (int u = 0; u < p; ++u) {
    if (parse_int(table.rows[u][0]) != u + 1)
      throw std::invalid_argument("csv: component out of order in " + path);
    hyper.beta[u] = parse_double(table.rows[u][1]);
    hyper.kernels[u].variance = parse_double(table.rows[u][2]);
    hyper.kernels[u].lengthscales.resize(q);
    for (int d = 0; d < q; ++d)
      hyper.kernels[u].lengthscales[d] = parse_double(table.rows[u][3 + d]);
  }
  hyper.validate();
  return hyper;
}

void write_fit_trace(const std::string& path, const std::vector<TraceEntry>& trace, int p,
                     int q) {
  Table table;
  table.header = {"start", "eval"};
  for (int u = 0; u < p; ++u) table.header.push_back("log_sigma2_" + format_int(u + 1));
  for (int u = 0; u < p; ++u)
    for (int d = 0; d < q; ++d)
      table.header.push_back("log_psi_" + format_int(u + 1) + "_" + format_int(d + 1));
  table.header.push_back("nll");
  for (const auto& entry : trace) {
    std::vector<std::string> row = {format_int(entry.start + 1), format_int(entry.eval + 1)};
    for (int u = 0; u < p; ++u) row.push_back(format_double(entry.params[u * (1 + q)]));
    for (int u = 0; u < p; ++u)
      for (int d = 0; d < q; ++d)
        row.push_back(format_double(entry.params[u * (1 + q) + 1 + d]));
    row.push_back(format_double(entry.nll));
    table.rows.push_back(std::move(row));
  }
  write_table(path, table);
}

void write_gaussian(const std::string& mean_path, const std::string& cov_path,
                    const GaussianDist& dist) {
  Table mean_table;
  mean_table.header = {"index", "mean"};
  for (int i = 0; i < dist.dim(); ++i)
    mean_table.rows.push_back({format_int(i + 1), format_double(dist.mean[i])});
  write_table(mean_path, mean_table);

  Table cov_table;
  cov_table.header = {"row", "col", "value"};
  for (int i = 0; i < dist.dim(); ++i)
    for (int j = 0; j < dist.dim(); ++j)
      cov_table.rows.push_back(
          {format_int(i + 1), format_int(j + 1), format_double(dist.cov(i, j))});
  write_table(cov_path, cov_table);
}

GaussianDist read_gaussian(const std::string& mean_path, const std::string& cov_path) {
  const Table mean_table = read_table(mean_path);
  expect_header(mean_table, {"index", "mean"}, mean_path);
  const int dim = static_cast<int>(mean_table.rows.size());
  GaussianDist dist;
  dist.mean.resize(dim);
  for (int i = 0; i < dim; ++i) {
    if (parse_int(mean_table.rows[i][0]) != i + 1)
      throw std::invalid_argument("csv: index out of order in " + mean_path);
    dist.mean[i] = parse_double(mean_table.rows[i][1]);
  }
  const Table cov_table = read_table(cov_path);
  expect_header(cov_table, {"row", "col", "value"}, cov_path);
  if (cov_table.rows.size() != static_cast<std::size_t>(dim) * dim)
    throw std::invalid_argument("csv: covariance entry count disagrees in " + cov_path);
  dist.cov.resize(dim, dim);
  for (const auto& row : cov_table.rows)
    dist.cov(parse_int(row[0]) - 1, parse_int(row[1]) - 1) = parse_double(row[2]);
  return dist;
}

namespace {

Table prediction_table_header(int q) {
  Table table;
  for (int d = 0; d < q; ++d) table.header.push_back("lambda_" + format_int(d + 1));
  table.header.insert(table.header.end(), {"comp", "mean", "var", "ci_lo", "ci_hi"});
  return table;
}

void append_prediction_row(Table& table, const Eigen::RowVectorXd& point, int comp, double mean,
                           double var) {
  const double sd = std::sqrt(std::max(var, 0.0));
  std::vector<std::string> row;
  for (Eigen::Index d = 0; d < point.size(); ++d) row.push_back(format_double(point[d]));
  row.push_back(format_int(comp));
  row.push_back(format_double(mean));
  row.push_back(format_double(var));
  row.push_back(format_double(mean - kBand95 * sd));
  row.push_back(format_double(mean + kBand95 * sd));
  table.rows.push_back(std::move(row));
}

}  // namespace

void write_predictions(const std::string& path, const MarginalPrediction& pred) {
  const int k = static_cast<int>(pred.points.rows());
  const int p = k ? static_cast<int>(pred.block_cov[0].rows()) : 0;
  Table table = prediction_table_header(static_cast<int>(pred.points.cols()));
  for (int i = 0; i < k; ++i)
    for (int u = 0; u < p; ++u)
      append_prediction_row(table, pred.points.row(i), u + 1, pred.mean[i * p + u],
                            pred.block_cov[i](u, u));
  write_table(path, table);
}

void write_predictions(const std::string& path, const Eigen::MatrixXd& points,
                       const GaussianDist& dist, int p) {
  const int k = static_cast<int>(points.rows());
  if (dist.dim() != k * p)
    throw std::invalid_argument("csv: prediction size disagrees with point count");
  Table table = prediction_table_header(static_cast<int>(points.cols()));
  for (int i = 0; i < k; ++i)
    for (int u = 0; u < p; ++u)
      append_prediction_row(table, points.row(i), u + 1, dist.mean[i * p + u],
                            dist.cov(i * p + u, i * p + u));
  write_table(path, table);
}

PredictionTable read_predictions(const std::string& path) {
  const Table table = read_table(path);
  if (table.header.size() < 6 || table.header[0].rfind("lambda_", 0) != 0)
    throw std::invalid_argument("csv: unexpected header in " + path);
  const int q = static_cast<int>(table.header.size()) - 5;
  const int rows = static_cast<int>(table.rows.size());
  PredictionTable out;
  out.points.resize(rows, q);
  out.comp.resize(rows);
  out.mean.resize(rows);
  out.var.resize(rows);
  out.ci_lo.resize(rows);
  out.ci_hi.resize(rows);
  for (int r = 0; r < rows; ++r) {
    const auto& row = table.rows[r];
    for (int d = 0; d < q; ++d) out.points(r, d) = parse_double(row[d]);
    out.comp[r] = parse_int(row[q]);
    out.mean[r] = parse_double(row[q + 1]);
    out.var[r] = parse_double(row[q + 2]);
    out.ci_lo[r] = parse_double(row[q + 3]);
    out.ci_hi[r] = parse_double(row[q + 4]);
  }
  return out;
}

void write_coverage(const std::string& path, const CoverageReport& report) {
  Table table;
  table.header = {"x_index", "x_value", "alpha", "N", "coverage"};
  for (std::size_t s = 0; s < report.x_index.size(); ++s)
    table.rows.push_back({format_int(report.x_index[s] + 1), format_double(report.x_value[s]),
                          format_double(report.alpha), format_int(report.pairs),
                          format_double(report.coverage[s])});
  write_table(path, table);
}

CoverageReport read_coverage(const std::string& path) {
  const Table table = read_table(path);
  expect_header(table, {"x_index", "x_value", "alpha", "N", "coverage"}, path);
  CoverageReport report;
  const int rows = static_cast<int>(table.rows.size());
  report.x_value.resize(rows);
  report.coverage.resize(rows);
  for (int r = 0; r < rows; ++r) {
    report.x_index.push_back(parse_int(table.rows[r][0]) - 1);
    report.x_value[r] = parse_double(table.rows[r][1]);
    report.alpha = parse_double(table.rows[r][2]);
    report.pairs = parse_int(table.rows[r][3]);
    report.coverage[r] = parse_double(table.rows[r][4]);
  }
  return report;
}

void write_mse(const std::string& path, const std::vector<MseRow>& rows) {
  Table table;
  table.header = {"estimator", "component", "mse"};
  for (const auto& row : rows)
    table.rows.push_back({row.estimator, format_int(row.component), format_double(row.mse)});
  write_table(path, table);
}

std::vector<MseRow> read_mse(const std::string& path) {
  const Table table = read_table(path);
  expect_header(table, {"estimator", "component", "mse"}, path);
  std::vector<MseRow> rows;
  for (const auto& row : table.rows)
    rows.push_back(MseRow{row[0], parse_int(row[1]), parse_double(row[2])});
  return rows;
}

void write_replicate_table(const std::string& path, const std::vector<ReplicateRow>& rows) {
  Table table;
  table.header = {"example", "n", "m", "rep", "estimator", "component", "mse", "status"};
  for (const auto& row : rows)
    table.rows.push_back({format_int(row.example), format_int(row.n), format_int(row.m),
                          format_int(row.rep), row.estimator, format_int(row.component),
                          format_double(row.mse), row.status});
  write_table(path, table);
}

std::vector<ReplicateRow> read_replicate_table(const std::string& path) {
  const Table table = read_table(path);
  expect_header(table, {"example", "n", "m", "rep", "estimator", "component", "mse", "status"},
                path);
  std::vector<ReplicateRow> rows;
  for (const auto& row : table.rows)
    rows.push_back(ReplicateRow{parse_int(row[0]), parse_int(row[1]), parse_int(row[2]),
                                parse_int(row[3]), row[4], parse_int(row[5]),
                                parse_double(row[6]), row[7]});
  return rows;
}

void write_output_density(const std::string& path, const std::vector<OutputDensityRow>& rows) {
  Table table;
  table.header = {"lambda", "x_index", "x", "mean", "var"};
  for (const auto& row : rows)
    table.rows.push_back({format_double(row.lambda), format_int(row.x_index),
                          format_double(row.x), format_double(row.mean),
                          format_double(row.var)});
  write_table(path, table);
}

void write_mixture_samples(const std::string& path, const std::vector<MixtureSampleRow>& rows) {
  Table table;
  table.header = {"x_index", "draw", "value"};
  for (const auto& row : rows)
    table.rows.push_back({format_int(row.x_index), format_int(row.draw),
                          format_double(row.value)});
  write_table(path, table);
}

}  // namespace gplincc::csv
