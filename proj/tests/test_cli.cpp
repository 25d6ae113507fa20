#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_tool(const std::string& args) {
  const std::string dir = fs::temp_directory_path() / "sbptool_test";
  fs::create_directories(dir);
  const std::string outfile = dir + "/cli_out.txt";
  const std::string cmd = std::string(SBP_TOOL_PATH) + " --golden-dir " +
                          std::string(SBP_SOURCE_DIR) + "/data " + args + " > " +
                          outfile + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(outfile);
  std::stringstream ss;
  ss << f.rdbuf();
  res.output = ss.str();
  return res;
}

std::string scratch_path(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "sbptool_test";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("verify subcommand reports clean operators", "[cli]") {
  const auto res = run_tool("verify --p 2 --dim 3");
  INFO(res.output);
  REQUIRE(res.exit_code == 0);
  REQUIRE(res.output.find("FAIL") == std::string::npos);
  REQUIRE(res.output.find("accuracy") != std::string::npos);
}

TEST_CASE("invalid arguments exit with code 2", "[cli]") {
  REQUIRE(run_tool("cubature --p 5 --dim 2").exit_code == 2);
  REQUIRE(run_tool("cubature --p 2 --dim 4").exit_code == 2);
  REQUIRE(run_tool("bogus-subcommand").exit_code == 2);
  REQUIRE(run_tool("converge --scheme se --p 2 --out /tmp/x.csv").exit_code == 2);
}

TEST_CASE("cubature subcommand writes a reloadable golden file", "[cli]") {
  const std::string out = scratch_path("tri_p2_fresh.json");
  const auto res = run_tool("cubature --p 2 --dim 2 --out " + out);
  INFO(res.output);
  REQUIRE(res.exit_code == 0);
  REQUIRE(fs::exists(out));
  REQUIRE(fs::exists(out + ".manifest.json"));
  // rerunning reproduces the file byte for byte
  const std::string first = slurp(out);
  REQUIRE(run_tool("cubature --p 2 --dim 2 --out " + out).exit_code == 0);
  REQUIRE(slurp(out) == first);
}

TEST_CASE("build-ops writes operator JSON with metadata", "[cli]") {
  const std::string out = scratch_path("ops_p2.json");
  const auto res = run_tool("build-ops --p 2 --dim 2 --out " + out);
  INFO(res.output);
  REQUIRE(res.exit_code == 0);
  const std::string body = slurp(out);
  REQUIRE(body.find("\"Qx\"") != std::string::npos);
  REQUIRE(body.find("\"faces\"") != std::string::npos);
  REQUIRE(body.find("\"metadata\"") != std::string::npos);
}

TEST_CASE("spectrum subcommand emits the re,im table", "[cli]") {
  const std::string out = scratch_path("spec_p1.csv");
  const auto res = run_tool("spectrum --scheme csbp --p 1 --n 4 --out " + out);
  INFO(res.output);
  REQUIRE(res.exit_code == 0);
  std::ifstream f(out);
  std::string header;
  std::getline(f, header);
  REQUIRE(header == "re,im");
  int rows = 0;
  for (std::string line; std::getline(f, line);) ++rows;
  REQUIRE(rows == 16);  // N^2 global nodes at p=1
}

TEST_CASE("converge subcommand writes the study CSV", "[cli]") {
  const std::string out = scratch_path("conv_dsbp_p1.csv");
  const auto res = run_tool("converge --scheme dsbp --p 1 --n 4,8 --out " + out);
  INFO(res.output);
  REQUIRE(res.exit_code == 0);
  std::ifstream f(out);
  std::string header;
  std::getline(f, header);
  REQUIRE(header == "scheme,p,N,h,normalized_error");
  int rows = 0;
  double last_err = 1e300;
  for (std::string line; std::getline(f, line);) {
    ++rows;
    const auto pos = line.rfind(',');
    const double err = std::stod(line.substr(pos + 1));
    REQUIRE(err < last_err);  // refinement shrinks the error
    last_err = err;
  }
  REQUIRE(rows == 2);
}

TEST_CASE("energy subcommand records the time history", "[cli]") {
  const std::string out = scratch_path("energy_csbp_p1.csv");
  const auto res =
      run_tool("energy --scheme csbp --p 1 --n 4 --cfl 0.5 --t 0.25 --out " + out);
  INFO(res.output);
  REQUIRE(res.exit_code == 0);
  std::ifstream f(out);
  std::string header;
  std::getline(f, header);
  REQUIRE(header == "t,delta_E");
}
