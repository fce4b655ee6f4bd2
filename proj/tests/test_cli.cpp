#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>
#include <sys/wait.h>

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell with stderr folded into stdout.
Outcome cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" MFCG_CLI_PATH "\" " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 512> buf{};
  while (fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) o.out += buf.data();
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string config(const char* name) { return std::string("\"") + MFCG_CONFIG_DIR + "/" + name + "\""; }

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("mfcg_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve prints the asymptotic coefficients") {
  const auto dir = scratch("solve");
  const auto o = cli("solve --benchmark asymptotic_lq --config " + config("asymptotic_lq.cfg") + " --out " +
                     dir.string());
  CHECK(o.code == 0);
  CHECK(o.out.find("gamma2") != std::string::npos);
  CHECK(o.out.find("0.240963855") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "theory_control.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("solve prints the trader coefficients") {
  const auto o = cli("solve --benchmark trader --config " + config("trader_x0_1.cfg") + " --out " +
                     scratch("solve_trader").string());
  CHECK(o.code == 0);
  CHECK(o.out.find("delta_plus") != std::string::npos);
  CHECK(o.out.find("eta_bar(0)") != std::string::npos);
}

TEST_CASE("solve rejects a benchmark that disagrees with the config") {
  const auto o = cli("solve --benchmark trader --config " + config("asymptotic_lq.cfg"));
  CHECK(o.code == 1);
}

TEST_CASE("a short run writes the four tables") {
  const auto dir = scratch("run");
  const auto o =
      cli("run --config " + config("trader_x0_1.cfg") + " --episodes 10 --runs 1 --seed 4 --out " + dir.string());
  CHECK(o.code == 0);
  for (const char* f : {"control.csv", "distributions.csv", "report.csv", "meta.csv"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("the output directory can come from the environment") {
  const auto dir = scratch("env_out");
  const auto o = cli("run --config " + config("trader_x0_0.cfg") + " --episodes 5 --runs 1",
                     "MFCG_OUT_DIR=\"" + dir.string() + "\"");
  CHECK(o.code == 0);
  CHECK(std::filesystem::exists(dir / "report.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("riccati-limit prints one decreasing row per M") {
  const auto o = cli("riccati-limit --c1 0.5 --c2 0.25 --T 1 --M 10,100,1000");
  REQUIRE(o.code == 0);
  const auto head = o.out.find("M,sup_zeta,sup_phi_gap,gronwall_bound\n");
  REQUIRE(head != std::string::npos);
  std::vector<double> gaps;
  std::size_t pos = o.out.find('\n', head) + 1;
  while (pos < o.out.size()) {
    const auto end = o.out.find('\n', pos);
    const std::string line = o.out.substr(pos, end - pos);
    const auto comma = line.find(',');
    if (comma == std::string::npos) break;
    gaps.push_back(std::stod(line.substr(comma + 1)));
    pos = end + 1;
  }
  REQUIRE(gaps.size() == 3);
  CHECK(gaps[1] < gaps[0]);
  CHECK(gaps[2] < gaps[1]);
}

TEST_CASE("usage errors exit with status 1") {
  CHECK(cli("").code == 1);
  CHECK(cli("frobnicate").code == 1);
  CHECK(cli("run --config " + config("asymptotic_lq.cfg") + " --bogus").code == 1);
  CHECK(cli("run --config /nonexistent/file.cfg").code == 1);
  const auto bad = cli("riccati-limit --c1 0.5 --c2 0.25 --T 1 --M ten");
  CHECK(bad.code != 0);
}

}  // TEST_SUITE
