#include "mosaic/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mosaic {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string token;
  while (std::getline(ss, token, ',')) {
    while (!token.empty() && (token.back() == '\r' || token.back() == ' '))
      token.pop_back();
    while (!token.empty() && token.front() == ' ') token.erase(token.begin());
    out.push_back(token);
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

IntMatrix read_data_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty data file: " + path);
  const auto header = split_csv_line(line);
  const int p = static_cast<int>(header.size());
  if (p < 1) throw std::runtime_error("data header has no columns: " + path);

  std::vector<std::vector<std::int64_t>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tokens = split_csv_line(line);
    if (static_cast<int>(tokens.size()) != p)
      throw std::runtime_error("ragged data row in " + path);
    std::vector<std::int64_t> row(p);
    for (int j = 0; j < p; ++j) row[j] = std::stoll(tokens[j]);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("no data rows in " + path);

  IntMatrix data(static_cast<Eigen::Index>(rows.size()), p);
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    for (int j = 0; j < p; ++j) data(i, j) = rows[i][j];
  return data;
}

void write_data_csv(const std::string& path, const IntMatrix& data) {
  auto out = open_out(path);
  for (int j = 0; j < data.cols(); ++j)
    out << (j ? "," : "") << "y" << (j + 1);
  out << "\n";
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (int j = 0; j < data.cols(); ++j)
      out << (j ? "," : "") << data(i, j);
    out << "\n";
  }
}

namespace {

std::vector<std::string> sample_header(int p) {
  std::vector<std::string> names;
  for (int j = 0; j < p; ++j) names.push_back("mu_" + std::to_string(j + 1));
  for (int j = 0; j < p; ++j) {
    const std::string idx = std::to_string(j + 1);
    names.push_back("sigma_" + idx + "_" + idx);
  }
  for (int k = 0; k < pair_count(p); ++k) {
    const auto [s, t] = pair_from_index(k, p);
    names.push_back("sigma_" + std::to_string(s + 1) + "_" +
                    std::to_string(t + 1));
  }
  return names;
}

}  // namespace

void write_samples_csv(const std::string& path, const ParameterDraws& draws) {
  auto out = open_out(path);
  const auto names = sample_header(draws.p);
  for (std::size_t j = 0; j < names.size(); ++j)
    out << (j ? "," : "") << names[j];
  out << "\n";
  for (int m = 0; m < draws.draws(); ++m) {
    for (int j = 0; j < draws.columns(); ++j)
      out << (j ? "," : "") << format_double(draws.values(m, j));
    out << "\n";
  }
}

ParameterDraws read_samples_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty samples file: " + path);
  const auto header = split_csv_line(line);
  int p = 0;
  while (p < static_cast<int>(header.size()) &&
         header[p].rfind("mu_", 0) == 0)
    ++p;
  if (p < 1) throw std::runtime_error("samples header lacks mu columns");
  const int expected = 2 * p + pair_count(p);
  if (static_cast<int>(header.size()) != expected)
    throw std::runtime_error("samples header has wrong column count");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tokens = split_csv_line(line);
    if (static_cast<int>(tokens.size()) != expected)
      throw std::runtime_error("ragged samples row in " + path);
    std::vector<double> row(expected);
    for (int j = 0; j < expected; ++j) row[j] = std::stod(tokens[j]);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("no sample rows in " + path);

  ParameterDraws draws;
  draws.p = p;
  draws.values.resize(static_cast<int>(rows.size()), expected);
  for (int m = 0; m < draws.draws(); ++m)
    for (int j = 0; j < expected; ++j) draws.values(m, j) = rows[m][j];
  return draws;
}

void write_truth_json(const std::string& path, const Parameters& truth) {
  nlohmann::json j;
  j["mu"] = std::vector<double>(truth.mu.data(), truth.mu.data() + truth.p());
  std::vector<std::vector<double>> sigma(truth.p(),
                                         std::vector<double>(truth.p()));
  for (int a = 0; a < truth.p(); ++a)
    for (int b = 0; b < truth.p(); ++b) sigma[a][b] = truth.sigma(a, b);
  j["sigma"] = sigma;
  write_json_file(path, j);
}

Parameters read_truth_json(const std::string& path) {
  const nlohmann::json j = read_json_file(path);
  const auto mu = j.at("mu").get<std::vector<double>>();
  const auto sigma = j.at("sigma").get<std::vector<std::vector<double>>>();
  const int p = static_cast<int>(mu.size());
  Parameters truth;
  truth.mu.resize(p);
  truth.sigma.resize(p, p);
  for (int a = 0; a < p; ++a) {
    truth.mu(a) = mu[a];
    if (static_cast<int>(sigma[a].size()) != p)
      throw std::runtime_error("truth sigma is not square in " + path);
    for (int b = 0; b < p; ++b) truth.sigma(a, b) = sigma[a][b];
  }
  return truth;
}

void write_report_json(const std::string& path, const EvalReport& report) {
  nlohmann::json j;
  j["level"] = report.level;
  j["draws"] = report.M;
  j["corrected"] = report.corrected;
  j["replicate_count"] = report.replicate_count;
  j["coverage_unreliable"] = report.coverage_unreliable;
  j["mse"] = report.mse;
  j["coverage"] = report.coverage;
  write_json_file(path, j);
}

void write_fisher_json(const std::string& path, const FisherDiagnostic& diag) {
  nlohmann::json j;
  j["mc_draws"] = diag.mc_draws;
  j["n"] = diag.n;
  std::vector<std::vector<std::vector<double>>> knots;
  for (const auto& block : diag.knot_blocks)
    knots.push_back({{block(0, 0), block(0, 1)}, {block(1, 0), block(1, 1)}});
  j["knot_blocks"] = knots;
  j["tile_blocks"] = std::vector<double>(
      diag.tile_blocks.data(), diag.tile_blocks.data() + diag.tile_blocks.size());
  std::vector<std::vector<double>> cross(diag.cross.rows());
  for (Eigen::Index r = 0; r < diag.cross.rows(); ++r)
    cross[r] = std::vector<double>(diag.cross.row(r).begin(),
                                   diag.cross.row(r).end());
  j["cross"] = cross;
  j["predicted_knot_sd"] =
      std::vector<double>(diag.predicted_knot_sd.data(),
                          diag.predicted_knot_sd.data() +
                              diag.predicted_knot_sd.size());
  if (diag.observed_knot_sd.size() > 0)
    j["observed_knot_sd"] =
        std::vector<double>(diag.observed_knot_sd.data(),
                            diag.observed_knot_sd.data() +
                                diag.observed_knot_sd.size());
  j["non_pd_blocks"] = diag.non_pd_blocks;
  write_json_file(path, j);
}

void write_complexity_csv(const std::string& path,
                          const ComplexityReport& report) {
  auto out = open_out(path);
  out << "probe,K,n,seconds_per_eval\n";
  for (const auto& row : report.rows)
    out << row.probe << "," << row.K << "," << row.n << ","
        << format_double(row.seconds_per_eval) << "\n";
}

nlohmann::json read_json_file(const std::string& path) {
  auto in = open_in(path);
  nlohmann::json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const nlohmann::json& value) {
  auto out = open_out(path);
  out << value.dump(2) << "\n";
}

}  // namespace mosaic
