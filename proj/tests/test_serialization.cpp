#include <map>
#include <sstream>

#include "doctest.h"
#include "liesig/errors.hpp"
#include "liesig/serialization.hpp"
#include "test_support.hpp"

using namespace liesig;
using liesig::test::max_abs_diff;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

MonteCarloOptions mc(std::uint64_t samples, std::uint64_t seed) {
  MonteCarloOptions o;
  o.samples = samples;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("tensor JSON round trip") {
  std::mt19937_64 gen(31);
  const auto x = liesig::test::random_series(3, 4, gen);
  const auto j = tensor_to_json(x);
  CHECK(j["n"] == 3);
  CHECK(j["N"] == 4);
  const auto y = tensor_from_json(Json::parse(j.dump()));
  CHECK(max_abs_diff(x, y) == 0.0);
}

TEST_CASE("malformed tensor JSON") {
  CHECK_THROWS_AS(tensor_from_json(Json::parse(R"({"n": 2, "N": 1, "levels": [[1]]})")), ShapeError);
  CHECK_THROWS_AS(tensor_from_json(Json::parse(R"({"n": 2, "N": 1, "levels": [[1], [1, 2, 3]]})")), ShapeError);
  CHECK_THROWS_AS(tensor_from_json(Json::parse(R"({"n": 2, "levels": [[1]]})")), ShapeError);
  CHECK_THROWS_AS(tensor_from_json(Json::parse(R"({"n": 2, "N": 0, "levels": [["a"]]})")), ShapeError);
}

TEST_CASE("average JSON and CSV carry the same numbers") {
  auto su2 = parse_group("su2");
  const auto avg = average_monte_carlo(*su2, 3, mc(20'000, 1));
  const auto j = Json::parse(average_to_json(avg).dump());
  CHECK(j["method"] == "monte_carlo");
  CHECK(j["group"] == "su2");
  CHECK(j["samples"] == 20000);
  const auto rows = parse_csv(average_to_csv(avg));
  REQUIRE(rows.front() == std::vector<std::string>{"level", "index", "coefficient", "stderr_level"});
  std::size_t count = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const int level = std::stoi(rows[r][0]);
    const int index = std::stoi(rows[r][1]);
    CHECK(std::stod(rows[r][2]) == j["levels"][level][index].get<double>());
    CHECK(std::stod(rows[r][3]) == j["stderr"][level].get<double>());
    ++count;
  }
  CHECK(count == static_cast<std::size_t>(avg.tensor.coefficient_count()));
}

TEST_CASE("spectrum JSON and CSV carry the same numbers") {
  const auto spec = spectrum_monte_carlo(*parse_group("torus:2"), 5, mc(20'000, 2));
  const auto j = Json::parse(spectrum_to_json(spec).dump());
  const auto rows = parse_csv(spectrum_to_csv(spec));
  REQUIRE(rows.size() == 7);
  for (int k = 0; k <= 5; ++k) {
    CHECK(std::stoi(rows[k + 1][1]) == 2 * k);
    CHECK(std::stod(rows[k + 1][2]) == j["rtr"][k].get<double>());
    CHECK(std::stod(rows[k + 1][3]) == j["stderr"][k].get<double>());
  }
}

TEST_CASE("recovery JSON and CSV carry the same numbers") {
  RecoverOptions opts;
  opts.mc = mc(200'000, 3);
  const auto rep = recover_geometry(*parse_group("circle"), opts);
  const auto j = Json::parse(recovery_to_json(rep).dump());
  std::map<std::string, double> summary;
  std::vector<std::pair<double, double>> table;
  for (const auto& row : parse_csv(recovery_to_csv(rep))) {
    if (row[0] == "summary") summary[row[1]] = std::stod(row[2]);
    if (row[0] == "F_table") table.emplace_back(std::stod(row[1]), std::stod(row[2]));
  }
  CHECK(summary["diameter"] == j["diameter"].get<double>());
  CHECK(summary["volume"] == j["volume"].get<double>());
  CHECK(summary["scalar_curvature"] == j["scalar_curvature"].get<double>());
  CHECK(summary["dimension"] == j["dimension"]["rounded"].get<double>());
  REQUIRE(table.size() == j["F_table"].size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(table[i].first == j["F_table"][i][0].get<double>());
    CHECK(table[i].second == j["F_table"][i][1].get<double>());
  }
}

TEST_CASE("path JSON round trip") {
  auto su2 = parse_group("su2");
  const auto path = sample_path(
      su2, [](double t) -> AlgebraVector { return Eigen::Vector3d(t, -t * t, 0.5 * t); }, uniform_times(16));
  const auto back = path_from_json(Json::parse(path_to_json(path).dump()));
  CHECK(back.model->kind() == "su2");
  CHECK(back.times == path.times);
  for (std::size_t i = 0; i < path.points.size(); ++i) CHECK((back.points[i].coords - path.points[i].coords).norm() == 0.0);
  CHECK_THROWS_AS(path_from_json(Json::parse(R"({"group": {"kind": "su2", "dim": 2}, "times": [0, 1], "points": []})")),
                  ShapeError);
}

TEST_CASE("doubles survive text") {
  for (double v : {0.1, 1.0 / 3.0, 2.789868133696453, 1e-300, -7.5e12}) CHECK(std::stod(format_double(v)) == v);
}
