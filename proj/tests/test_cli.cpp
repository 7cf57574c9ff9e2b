#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "elliptic/cli.hpp"

namespace fs = std::filesystem;
using elliptic::cli::run;

namespace {

const fs::path kConfigs = fs::path(ELLIPTIC_SOURCE_DIR) / "configs";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::current_path() / "cli_test_out" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.yaml";
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

int run_cmd(const std::string& cmd, const fs::path& config, const fs::path& out, std::vector<std::string> extra = {}) {
  std::vector<std::string> args = {cmd, "--config", config.string(), "--out", out.string()};
  args.insert(args.end(), extra.begin(), extra.end());
  return run(args);
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

const char* kScalarTemplate = R"(problem:
  dimension: 3
  components:
    - coefficient: {family: COEFF}
      nonlinearity: {family: NONLIN}
grid:
  r_max: 10.0
  n_nodes: 501
)";

std::string scalar_config(const std::string& coeff, const std::string& nonlin) {
  std::string s = kScalarTemplate;
  s.replace(s.find("COEFF"), 5, coeff);
  s.replace(s.find("NONLIN"), 6, nonlin);
  return s;
}

}  // namespace

TEST_CASE("check: bounded example") {
  const fs::path out = scratch("check_bounded");
  CHECK(run_cmd("check", kConfigs / "bounded.yaml", out) == 0);
  const std::string report = slurp(out / "report.txt");
  CHECK(report.rfind("# elliptic report\n# command: check\n# resolved config:\n", 0) == 0);
  CHECK(report.find("#     n_nodes: 4001") != std::string::npos);
  CHECK(report.find("#     max_iter: 10000") != std::string::npos);
  CHECK(report.find("\nverdict = BoundedExists\n") != std::string::npos);
}

TEST_CASE("check: constant coefficient reports the largeness clause") {
  const fs::path out = scratch("check_large");
  CHECK(run_cmd("check", kConfigs / "large.yaml", out) == 0);
  const std::string report = slurp(out / "report.txt");
  CHECK(report.find("AllRadialSolutionsLarge") != std::string::npos);
  CHECK(report.find("NoBoundedRadial") != std::string::npos);
}

TEST_CASE("check and classify: inconclusive exits 4") {
  const fs::path out = scratch("inconclusive");
  CHECK(run_cmd("check", kConfigs / "gaussian.yaml", out) == 4);
  CHECK(run_cmd("classify", kConfigs / "gaussian.yaml", out) == 4);
  CHECK(slurp(out / "report.txt").find("verdict = Inconclusive") != std::string::npos);
}

TEST_CASE("solve gate and --force") {
  const fs::path out = scratch("gate");
  CHECK(run_cmd("solve", kConfigs / "gaussian.yaml", out) == 4);
  CHECK_FALSE(fs::exists(out / "solution.csv"));
  CHECK(slurp(out / "report.txt").find("skipped = ") != std::string::npos);
  CHECK(run_cmd("solve", kConfigs / "gaussian.yaml", out, {"--force"}) == 0);
  CHECK(fs::exists(out / "solution.csv"));
  CHECK(slurp(out / "report.txt").find("forced = ") != std::string::npos);
}

TEST_CASE("solve: sinh closed form") {
  const fs::path out = scratch("sinh");
  CHECK(run_cmd("solve", kConfigs / "sinh.yaml", out) == 0);
  const auto rows = lines(slurp(out / "solution.csv"));
  REQUIRE(rows.size() == 5002);
  CHECK(rows[0] == "r,w_1");
  double worst = 0.0;
  for (std::size_t i = 2; i < rows.size(); ++i) {
    const auto comma = rows[i].find(',');
    const double r = std::stod(rows[i].substr(0, comma));
    const double w = std::stod(rows[i].substr(comma + 1));
    worst = std::max(worst, std::abs(w - std::sinh(r) / r) / (std::sinh(r) / r));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("solve: zero coefficients give constant envelopes") {
  const fs::path out = scratch("zero");
  CHECK(run_cmd("solve", kConfigs / "zero.yaml", out) == 0);
  const auto rows = lines(slurp(out / "solution.csv"));
  CHECK(rows[0] == "r,w_1,w_2,v_1,v_2");
  CHECK(rows[1] == "0,0.5,0.5,1,1");
  CHECK(rows.back() == "5,0.5,0.5,1,1");
  const std::string report = slurp(out / "report.txt");
  CHECK(report.find("lower.iterations = 1\n") != std::string::npos);
}

TEST_CASE("solve: iteration cap exits 3") {
  const fs::path out = scratch("capped");
  CHECK(run_cmd("solve", kConfigs / "capped.yaml", out) == 3);
  CHECK(slurp(out / "report.txt").find("lower.status = max_iterations") != std::string::npos);
}

TEST_CASE("solve: forced blow-up on a large-classified spec exits 0") {
  const fs::path dir = scratch("blowup");
  const fs::path cfg = write_config(dir, R"(problem:
  dimension: 3
  components:
    - coefficient: {family: constant, params: [1.0]}
      nonlinearity: {family: linear_mix, params: [1.0]}
grid:
  r_max: 40.0
  n_nodes: 2001
)");
  CHECK(run_cmd("solve", cfg, dir, {"--force"}) == 0);
  const std::string report = slurp(dir / "report.txt");
  CHECK(report.find("lower.status = blow_up_detected") != std::string::npos);
  CHECK(report.find("largeness.trend = large_trend") != std::string::npos);
}

TEST_CASE("oracle exit codes") {
  const fs::path out = scratch("oracle");
  CHECK(run_cmd("oracle", kConfigs / "sinh.yaml", out) == 0);
  CHECK(lines(slurp(out / "oracle.csv"))[0] == "r,u_1");
  CHECK(slurp(out / "report.txt").find("cross.passed = true") != std::string::npos);
  CHECK(run_cmd("oracle", kConfigs / "coarse_oracle.yaml", out) == 5);
  CHECK(slurp(out / "report.txt").find("cross.passed = false") != std::string::npos);
  CHECK(run_cmd("oracle", kConfigs / "zero.yaml", out) == 0);
  CHECK(slurp(out / "report.txt").find("cross.sup_abs = 0\n") != std::string::npos);
}

TEST_CASE("sweep phase table") {
  const fs::path out = scratch("sweep");
  CHECK(run_cmd("sweep", kConfigs / "sweep.yaml", out) == 0);
  const auto rows = lines(slurp(out / "sweep.csv"));
  REQUIRE(rows.size() == 13);
  CHECK(rows[0] == "sigma,gamma,verdict,keller_osserman,solver_status,sum_w_rmax,iterations");
  // Lexicographic order, first axis slowest.
  CHECK(rows[1].rfind("1,0.5,", 0) == 0);
  CHECK(rows[2].rfind("1,1,", 0) == 0);
  CHECK(rows[4].rfind("2,0.5,", 0) == 0);
  // gamma = 0.5, 1, 2 reads diverges, diverges, converges.
  CHECK(rows[1].find(",diverges,") != std::string::npos);
  CHECK(rows[2].find(",diverges,") != std::string::npos);
  CHECK(rows[3].find(",converges,") != std::string::npos);
  // gamma = 1: the verdict flips to BoundedExists between sigma = 2 and 3.
  CHECK(rows[5].find("BoundedExists") == std::string::npos);
  CHECK(rows[8].find(",BoundedExists,") != std::string::npos);
  CHECK(rows[11].find(",BoundedExists,") != std::string::npos);
}

TEST_CASE("sweep with an empty range writes only the header") {
  const fs::path dir = scratch("empty_sweep");
  const fs::path cfg = write_config(dir, scalar_config("constant, params: [1.0]", "power, params: [1.0]") + R"(sweep:
  - name: c
    target: coefficient
    param: 0
    values: []
)");
  CHECK(run_cmd("sweep", cfg, dir) == 0);
  CHECK(slurp(dir / "sweep.csv") == "c,verdict,keller_osserman,solver_status,sum_w_rmax,iterations\n");
}

TEST_CASE("configuration errors exit 2") {
  const fs::path dir = scratch("errors");
  CHECK(run_cmd("check", dir / "missing.yaml", dir) == 2);
  CHECK(run_cmd("check", write_config(dir, "problem:\n  dimension: 3\n  bogus: 1\n"), dir) == 2);
  CHECK(run_cmd("check", write_config(dir, scalar_config("nope, params: [1.0]", "power, params: [1.0]")), dir) == 2);
  CHECK(run_cmd("check", write_config(dir, scalar_config("power_decay, params: [1.0]", "power, params: [1.0]")),
                dir) == 2);
  CHECK(run_cmd("check", write_config(dir, scalar_config("constant, params: [-1.0]", "power, params: [1.0]")),
                dir) == 2);
  CHECK(run_cmd("check", write_config(dir, "problem: [1, 2\n"), dir) == 2);
  CHECK(run_cmd("solve", write_config(dir, scalar_config("constant, params: [1.0]", "constant, params: [1.0]")),
                dir, {"--force"}) == 2);
  CHECK(run_cmd("check", kConfigs / "bounded.yaml", dir, {"--nodes", "5"}) == 2);
  CHECK(run_cmd("check", kConfigs / "bounded.yaml", dir, {"--rmax", "-1"}) == 2);
  CHECK(run_cmd("check", kConfigs / "bounded.yaml", dir, {"--epsilon", "0"}) == 2);
  CHECK(run({"check"}) == 2);
  CHECK(run({"frobnicate"}) == 2);
  CHECK(run({}) == 2);
  CHECK(run({"--help"}) == 0);
}

TEST_CASE("command-line overrides land in the embedded config") {
  const fs::path out = scratch("overrides");
  CHECK(run_cmd("check", kConfigs / "bounded.yaml", out, {"--nodes", "64", "--rmax", "7.5", "--epsilon", "0.25"}) == 0);
  const std::string report = slurp(out / "report.txt");
  CHECK(report.find("#     n_nodes: 64\n") != std::string::npos);
  CHECK(report.find("#     r_max: 7.5\n") != std::string::npos);
  CHECK(report.find("#     epsilon: 0.25\n") != std::string::npos);
}

TEST_CASE("outputs are byte-identical across runs") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  for (const char* cfg : {"bounded.yaml", "annotated.yaml"}) {
    CHECK(run_cmd("solve", kConfigs / cfg, a) == 0);
    CHECK(run_cmd("solve", kConfigs / cfg, b) == 0);
    CHECK(slurp(a / "solution.csv") == slurp(b / "solution.csv"));
    CHECK(slurp(a / "report.txt") == slurp(b / "report.txt"));
  }
  CHECK(run_cmd("sweep", kConfigs / "sweep.yaml", a) == 0);
  CHECK(run_cmd("sweep", kConfigs / "sweep.yaml", b) == 0);
  CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
}
