#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "mosaic/io.hpp"
#include "mosaic/rng.hpp"

using namespace mosaic;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("mosaic_io_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("data CSV round trip with the y1..yp header") {
  TempDir dir;
  IntMatrix data(3, 2);
  data << 0, 5, 2, 1, 7, 0;
  const std::string path = dir.file("data.csv");
  write_data_csv(path, data);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "y1,y2");

  const IntMatrix back = read_data_csv(path);
  CHECK(back == data);
}

TEST_CASE("sample CSV header and exact round trip") {
  TempDir dir;
  Rng rng(3);
  ParameterDraws draws;
  draws.p = 3;
  draws.values.resize(4, draws.columns());
  for (int m = 0; m < 4; ++m)
    for (int j = 0; j < draws.columns(); ++j)
      draws.values(m, j) = rng.normal() * std::pow(10.0, (j % 7) - 3);

  const std::string path = dir.file("samples.csv");
  write_samples_csv(path, draws);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "mu_1,mu_2,mu_3,sigma_1_1,sigma_2_2,sigma_3_3,"
        "sigma_1_2,sigma_1_3,sigma_2_3");

  const ParameterDraws back = read_samples_csv(path);
  REQUIRE(back.p == 3);
  REQUIRE(back.draws() == 4);
  CHECK(back.values == draws.values);  // bit-exact via %.17g
}

TEST_CASE("rewriting the same draws is byte-identical") {
  TempDir dir;
  Rng rng(9);
  ParameterDraws draws;
  draws.p = 2;
  draws.values.resize(5, draws.columns());
  for (int m = 0; m < 5; ++m)
    for (int j = 0; j < draws.columns(); ++j) draws.values(m, j) = rng.normal();
  const std::string a = dir.file("a.csv"), b = dir.file("b.csv");
  write_samples_csv(a, draws);
  write_samples_csv(b, draws);
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  const std::string ca((std::istreambuf_iterator<char>(fa)),
                       std::istreambuf_iterator<char>());
  const std::string cb((std::istreambuf_iterator<char>(fb)),
                       std::istreambuf_iterator<char>());
  CHECK(ca == cb);
}

TEST_CASE("truth JSON round trip") {
  TempDir dir;
  Parameters truth;
  truth.mu = Eigen::Vector2d(-3.5, -3.25);
  truth.sigma.resize(2, 2);
  truth.sigma << 0.8, 0.21, 0.21, 0.66;
  const std::string path = dir.file("truth.json");
  write_truth_json(path, truth);
  const Parameters back = read_truth_json(path);
  CHECK(back.mu == truth.mu);
  CHECK(back.sigma == truth.sigma);
}

TEST_CASE("negative data entries are rejected by compress not by io") {
  TempDir dir;
  const std::string path = dir.file("neg.csv");
  std::ofstream out(path);
  out << "y1\n-3\n";
  out.close();
  const IntMatrix data = read_data_csv(path);
  CHECK(data(0, 0) == -3);
  CHECK_THROWS_AS(compress(data), std::invalid_argument);
}

TEST_CASE("report JSON writes the group maps") {
  TempDir dir;
  EvalReport report;
  report.M = 100;
  report.mse["mu"] = 0.01;
  report.coverage["mu"] = 0.95;
  const std::string path = dir.file("report.json");
  write_report_json(path, report);
  const nlohmann::json j = read_json_file(path);
  CHECK(j.at("mse").at("mu").get<double>() == 0.01);
  CHECK(j.at("coverage").at("mu").get<double>() == 0.95);
  CHECK(j.at("draws").get<int>() == 100);
}
