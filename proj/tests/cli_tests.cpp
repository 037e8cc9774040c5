#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

int g_counter = 0;

CmdResult run_cli(const std::string& args) {
  const fs::path outfile =
      fs::temp_directory_path() /
      ("robreg_cli_test_" + std::to_string(::getpid()) + "_" +
       std::to_string(g_counter++) + ".out");
  const std::string cmd = std::string(ROBREG_CLI_PATH) + " " + args + " > " +
                          outfile.string() + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  CmdResult r;
  r.exit_code = WEXITSTATUS(raw);
  std::ifstream in(outfile);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  fs::remove(outfile);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("data emits the embedded tables") {
  const CmdResult food = run_cli("data --name table2");
  CHECK(food.exit_code == 0);
  const auto rows = lines_of(food.out);
  REQUIRE(rows.size() == 21);
  CHECK(rows[0] == "x,y");
  CHECK(rows[17] == "250.2,6.1");
  CHECK(rows[20] == "696.4,41.1");

  const CmdResult pdi = run_cli("data --name table1 --y11 85");
  CHECK(pdi.exit_code == 0);
  const auto prows = lines_of(pdi.out);
  REQUIRE(prows.size() == 21);
  CHECK(prows[1] == "1,20.8");
  CHECK(prows[11] == "3,85");

  // y11 defaults to 85
  const CmdResult pdi_default = run_cli("data --name table1");
  CHECK(pdi_default.out == pdi.out);
}

TEST_CASE("unknown dataset name exits with the usage code") {
  CHECK(run_cli("data --name table9").exit_code == 2);
}

TEST_CASE("missing subcommand and bad flags exit with the usage code") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("fit").exit_code == 2);  // --data is required
  CHECK(run_cli("fit --data table2 --model cauchy").exit_code == 2);
  CHECK(run_cli("fit --data table2 --prior jeffreys").exit_code == 2);
}

TEST_CASE("empty or malformed csv input exits with the usage code") {
  const fs::path dir = fs::temp_directory_path();
  const fs::path empty = dir / "robreg_empty.csv";
  std::ofstream(empty.string()) << "";
  CHECK(run_cli("fit --data " + empty.string()).exit_code == 2);
  fs::remove(empty);

  const fs::path noheader = dir / "robreg_noheader.csv";
  std::ofstream(noheader.string()) << "1,2\n3,4\n";
  CHECK(run_cli("fit --data " + noheader.string()).exit_code == 2);
  fs::remove(noheader);

  const fs::path zerox = dir / "robreg_zerox.csv";
  std::ofstream(zerox.string()) << "x,y\n1,2\n0,4\n2,5\n";
  CHECK(run_cli("fit --data " + zerox.string()).exit_code == 2);
  fs::remove(zerox);
}

TEST_CASE("numerical failure exits with code 3") {
  // responses at the edge of double range push every cell to -inf
  const fs::path huge = fs::temp_directory_path() / "robreg_huge.csv";
  std::ofstream(huge.string())
      << "x,y\n1,1e308\n2,-1e308\n3,1e308\n4,-1e308\n";
  CHECK(run_cli("fit --data " + huge.string() + " --model lptn --prior flat")
            .exit_code == 3);
  fs::remove(huge);
}

TEST_CASE("fit round-trips bitwise through data's csv output") {
  const CmdResult direct =
      run_cli("fit --data table2 --model lptn --theta 0.5 --prior inv-sigma");
  CHECK(direct.exit_code == 0);

  const fs::path csv = fs::temp_directory_path() / "robreg_roundtrip.csv";
  const CmdResult data = run_cli("data --name table2 --output " + csv.string());
  CHECK(data.exit_code == 0);
  const CmdResult via_file =
      run_cli("fit --data " + csv.string() +
              " --model lptn --theta 0.5 --prior inv-sigma");
  fs::remove(csv);
  CHECK(via_file.exit_code == 0);
  CHECK(via_file.out == direct.out);
}

TEST_CASE("fit reproduces the published food-expenditure numbers") {
  const CmdResult r = run_cli(
      "fit --data table2 --model lptn --theta 0.5 --prior inv-sigma --mu-x 210");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(std::fabs(j["median"]["beta"].get<double>() - 0.319) < 0.01);
  CHECK(std::fabs(j["ratio"]["point"].get<double>() - 0.319) < 0.01);
  CHECK(std::fabs(j["population_mean"]["point"].get<double>() - 66.99) < 0.5);

  const CmdResult n =
      run_cli("fit --data table2 --model normal --theta 0.5 --prior inv-sigma");
  REQUIRE(n.exit_code == 0);
  const nlohmann::json jn = nlohmann::json::parse(n.out);
  CHECK(std::fabs(jn["hpd95"]["sigma"][0].get<double>() - 1.559) < 0.02);
  CHECK(std::fabs(jn["hpd95"]["sigma"][1].get<double>() - 3.006) < 0.02);
}

TEST_CASE("sweep emits one csv row per point and model") {
  const CmdResult single =
      run_cli("sweep --steps 1 --from 128 --to 128 --models lptn");
  CHECK(single.exit_code == 0);
  const auto rows = lines_of(single.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "y_value,model,beta_hat,sigma_hat");

  const CmdResult multi =
      run_cli("sweep --steps 5 --from 85 --to 385 --models normal,lptn");
  CHECK(multi.exit_code == 0);
  CHECK(lines_of(multi.out).size() == 1 + 5 * 2);

  CHECK(run_cli("sweep --index 21").exit_code == 2);
  CHECK(run_cli("sweep --index 0").exit_code == 2);
}

TEST_CASE("converge emits the trace csv") {
  const CmdResult r = run_cli(
      "converge --outliers 11:+ --omegas 100,1000 --model lptn --threads 2");
  CHECK(r.exit_code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "omega,l1,log_marginal_ratio");
  CHECK(run_cli("converge --outliers 11:x").exit_code == 2);
  CHECK(run_cli("converge --outliers 40:+").exit_code == 2);
}

TEST_CASE("simulate emits the mse table csv") {
  const CmdResult r = run_cli("simulate --reps 20 --seed 7 --threads 2");
  CHECK(r.exit_code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 1 + 3 * 3 * 2);
  CHECK(rows[0] == "scenario,model,parameter,mse,mc_se,failures,reps");
  CHECK(run_cli("simulate --reps 5 --scenarios nope").exit_code == 2);
}
