#include <doctest.h>

#include <cstdlib>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string err;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hbvp_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(HBVP_CLI) + " " + args + " --quiet --out " + dir.string() + " > " +
                          (dir / "stdout.txt").string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), slurp(err)};
}

}  // namespace

TEST_CASE("solve F1 at eps = 0") {
  const auto dir = scratch("solve");
  const Run r = run("solve --gallery F1_smooth_perturb --eps 0", dir);
  CHECK(r.code == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["ode_residual"].get<double>() <= 1e-8);
  CHECK(summary["cond0_margin"].get<double>() > 0.1);
  CHECK(slurp(dir / "solution.csv").rfind("t,re_y1,im_y1\n", 0) == 0);
}

TEST_CASE("solve F3 refuses with Condition (0)") {
  const auto dir = scratch("f3");
  const Run r = run("solve --gallery F3_cond0_violated", dir);
  CHECK(r.code == 2);
  CHECK(r.err.find("Condition (0)") != std::string::npos);
}

TEST_CASE("malformed config exits 1 naming the key") {
  const auto dir = scratch("bad");
  std::ofstream(dir / "bad.json")
      << R"({"r": 2, "m": 1, "n": 0, "alpha": 0.5, "interval": [0, 1], "eps0": 1,
             "coeffs": [[["1"]], [["t*("]]], "rhs": ["1"],
             "boundary": {"point_terms": [{"order": 0, "point": 0, "coeff": [[1], [0]]}]},
             "target": [0, 1]})";
  const Run r = run("solve --config " + (dir / "bad.json").string(), dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("coeffs[1][0][0]") != std::string::npos);

  const Run missing = run("solve --config " + (dir / "nope.json").string(), dir);
  CHECK(missing.code == 1);
  const Run usage = run("solve --gallery F1_smooth_perturb --degree 2", dir);
  CHECK(usage.code == 1);
}

TEST_CASE("sweep F1: 20 rows, byte-identical reruns") {
  const auto dir = scratch("sweep");
  CHECK(run("sweep --gallery F1_smooth_perturb --eps0 1 --factor 0.5 --count 20", dir).code == 0);
  const std::string first = slurp(dir / "sweep.csv");
  const std::string plot = slurp(dir / "sweep_plot.csv");
  CHECK(std::count(first.begin(), first.end(), '\n') == 21);
  CHECK(run("sweep --gallery F1_smooth_perturb --eps0 1 --factor 0.5 --count 20", dir).code == 0);
  CHECK(slurp(dir / "sweep.csv") == first);
  CHECK(slurp(dir / "sweep_plot.csv") == plot);
  const auto rep = nlohmann::json::parse(slurp(dir / "sweep.json"));
  CHECK(rep["band_ok"] == true);
  CHECK(rep["kappa_high"].get<double>() / rep["kappa_low"].get<double>() <= 1e2);
}

TEST_CASE("sweep with the single value eps = 0") {
  const auto dir = scratch("sweep0");
  CHECK(run("sweep --gallery F1_smooth_perturb --eps 0", dir).code == 0);
  const std::string csv = slurp(dir / "sweep.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("sweep F4 flags the error tail") {
  const auto dir = scratch("sweep4");
  CHECK(run("sweep --gallery F4_limitI_violated", dir).code == 0);
  CHECK(nlohmann::json::parse(slurp(dir / "sweep.json"))["error_tends_to_zero"] == false);
}

TEST_CASE("verify exit codes") {
  const auto dir = scratch("verify");
  CHECK(run("verify --gallery F4_limitI_violated", dir).code == 0);
  CHECK(run("verify --gallery F1_smooth_perturb --tol 1e-30", dir).code == 3);
  CHECK(run("verify", dir).code == 1);
  const Run all = run("verify --all --jobs 4", dir);
  CHECK(all.code == 0);
  const auto v = nlohmann::json::parse(slurp(dir / "verify.json"));
  CHECK(v.size() == 6);
  for (const auto& f : v) CHECK(f["agreement"] == true);
}
