#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"

using vincl::cli::CliConfig;
namespace exit_code = vincl::cli::exit_code;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const CliConfig& cfg) {
  std::ostringstream out, err;
  const int code = vincl::cli::run(cfg, out, err);
  return {code, out.str(), err.str()};
}

Result run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "vincl");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code =
      vincl::cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

CliConfig config(std::string sub, std::string instance) {
  CliConfig c;
  c.subcommand = std::move(sub);
  c.instance_name = std::move(instance);
  return c;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve converges on 4.7") {
  auto cfg = config("solve", "example_4_7");
  cfg.rho = 0.35;
  const auto r = run(cfg);
  CHECK(r.code == exit_code::ok);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["summary"]["converged"] == true);
}

TEST_CASE("check-condition exit codes") {
  auto cfg = config("check-condition", "example_4_7");
  cfg.rho = 0.35;
  CHECK(run(cfg).code == exit_code::ok);
  cfg.rho = 3.8;
  const auto r = run(cfg);
  CHECK(r.code == exit_code::condition_violated);
  CHECK(r.out.find("violated_radicand") != std::string::npos);
}

TEST_CASE("human condition output itemizes the radicand") {
  auto cfg = config("check-condition", "example_4_7");
  cfg.rho = 0.35;
  cfg.format = vincl::cli::Format::human;
  const auto r = run(cfg);
  CHECK(r.out.find("radicand") != std::string::npos);
  CHECK(r.out.find("theta") != std::string::npos);
}

TEST_CASE("verify exit codes") {
  CHECK(run(config("verify", "example_4_7")).code == exit_code::ok);
  const auto r = run(config("verify", "example_3_3"));
  CHECK(r.code == exit_code::expectation_unmet);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.contains("bundle"));
}

TEST_CASE("verify is byte-identical for a fixed seed") {
  CHECK(run(config("verify", "example_4_7")).out == run(config("verify", "example_4_7")).out);
}

TEST_CASE("non-surjective instance exits 5") {
  const auto r = run(config("solve", "example_3_3"));
  CHECK(r.code == exit_code::non_surjective);
  CHECK(r.err.find("not surjective") != std::string::npos);
}

TEST_CASE("non-convergence exits 2 with the trace written") {
  auto cfg = config("trace-export", "example_4_7");
  cfg.max_iters = 5;
  const auto r = run(cfg);
  CHECK(r.code == exit_code::not_converged);
  CHECK(r.out.rfind("n,step,ratio", 0) == 0);
}

TEST_CASE("parse errors exit 1 with line diagnostics") {
  const auto path = std::filesystem::temp_directory_path() / "vincl_cli_bad.json";
  {
    std::ofstream out(path);
    out << "{\n  \"dim\": 2,\n  \"A\": [\n}";
  }
  CliConfig cfg;
  cfg.subcommand = "solve";
  cfg.instance_file = path.string();
  const auto r = run(cfg);
  CHECK(r.code == exit_code::parse_error);
  CHECK(r.err.find("line") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("unknown instances and flags exit 1") {
  CHECK(run(config("solve", "nope")).code == exit_code::parse_error);
  CHECK(run_args({"solve", "--instance", "example_4_7", "--bogus"}).code == exit_code::parse_error);
  CHECK(run_args({"solve", "--instance", "example_4_7", "--instance-file", "x.json"}).code ==
        exit_code::parse_error);
  CHECK(run_args({"solve"}).code == exit_code::parse_error);
  CHECK(run_args({"solve", "--instance", "example_4_7", "--rho", "abc"}).code ==
        exit_code::parse_error);
}

TEST_CASE("argv entry point and output file") {
  const auto path = std::filesystem::temp_directory_path() / "vincl_cli_out.csv";
  const auto r = run_args({"trace-export", "--instance", "example_4_7", "--rho", "0.35", "-o",
                           path.string()});
  CHECK(r.code == exit_code::ok);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "n,step,ratio,residual,theta_n,error_norm,u1,u2,schema");
  std::filesystem::remove(path);
}

TEST_CASE("list-instances and help") {
  const auto r = run_args({"list-instances"});
  CHECK(r.code == exit_code::ok);
  CHECK(r.out.find("example_4_7") != std::string::npos);
  CHECK(run_args({"--help"}).code == exit_code::ok);
}

}
