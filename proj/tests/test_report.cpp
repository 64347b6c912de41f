#include <doctest.h>

#include <sstream>

#include "vincl/instances.hpp"
#include "vincl/report.hpp"

using namespace vincl;

TEST_SUITE("report") {

TEST_CASE("csv trace layout") {
  SolverConfig cfg;
  cfg.max_iters = 3;
  const auto trace = solve(example_4_7().instance, cfg);
  const auto csv = trace_to_csv(trace);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,step,ratio,residual,theta_n,error_norm,u1,u2,schema");
  std::getline(in, line);
  CHECK(line.rfind("0,,,", 0) == 0);
  CHECK(line.size() > std::string(kTraceSchema).size());
  CHECK(line.substr(line.size() - std::string(kTraceSchema).size()) == kTraceSchema);
  std::size_t rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == trace.rows.size());
}

TEST_CASE("csv numbers round-trip exactly") {
  SolverConfig cfg;
  cfg.max_iters = 2;
  const auto trace = solve(example_4_7().instance, cfg);
  std::istringstream in(trace_to_csv(trace));
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::getline(in, line);
  // Row 1: n, step, ... u1, u2, schema
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  REQUIRE(cells.size() == 9);
  CHECK(std::stod(cells[6]) == trace.rows[1].u[0]);
  CHECK(std::stod(cells[1]) == *trace.rows[1].step);
}

TEST_CASE("json is deterministic and nulls non-finite values") {
  SolverConfig cfg;
  cfg.max_iters = 4;
  const auto a = to_json(solve(example_4_7().instance, cfg)).dump();
  const auto b = to_json(solve(example_4_7().instance, cfg)).dump();
  CHECK(a == b);
  Certificate c;
  const auto j = to_json(c);
  CHECK(j["constant"].is_null());
  CHECK(j["witness"]["lhs"].is_null());
}

TEST_CASE("condition report json itemizes the terms") {
  const auto j = to_json(check_condition_vi(example_4_7().instance, 0.35));
  CHECK(j["verdict"] == "satisfied");
  CHECK(j["terms"].size() == 3);
  CHECK(j["radicand"].get<double>() == doctest::Approx(0.75227125));
}

}
