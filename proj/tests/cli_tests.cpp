// End-to-end tests of the ldp binary: spawns the tool with config files in a
// scratch directory and checks outputs and exit codes. The tool path arrives
// as argv[1] from ctest.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "ldp/io.hpp"
#include "ldp/planner.hpp"
#include "ldp/validation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;

#define EXPECT(cond, label)                                        \
  do {                                                             \
    if (!(cond)) {                                                 \
      std::fprintf(stderr, "FAILED: %s (%s:%d)\n", label, __FILE__, __LINE__); \
      ++g_failures;                                                \
    }                                                              \
  } while (0)

std::string g_tool;
fs::path g_dir;

int run(const std::string& args) {
  const std::string cmd = g_tool + " " + args + " >" + (g_dir / "stdout.txt").string() +
                          " 2>" + (g_dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const fs::path& p, const std::string& text) {
  ldp::io::write_file_atomic(p.string(), text);
}

std::string slurp(const fs::path& p) { return ldp::io::read_file(p.string()); }

void test_plan_roundtrip() {
  write(g_dir / "plan_cfg.json", R"({
    "alpha": 2.0, "epsilon": 0.5,
    "potential": {"L": 1.0, "d": 3},
    "process": "overdamped_sc", "mode": "one_sided"
  })");
  const std::string base = "plan --config " + (g_dir / "plan_cfg.json").string() +
                           " --seed 1 --out " + (g_dir / "out1").string();
  EXPECT(run(base) == 0, "plan exits 0");
  const json plan = json::parse(slurp(g_dir / "out1/plan.json"));
  EXPECT(plan.at("T").get<long long>() == 0, "L=1 target plans zero steps");
  EXPECT(plan.at("draw_initial_directly").get<bool>(), "L=1 draws the initial directly");

  EXPECT(run("plan --config " + (g_dir / "plan_cfg.json").string() + " --seed 1 --out " +
             (g_dir / "out2").string()) == 0,
         "second plan run exits 0");
  EXPECT(slurp(g_dir / "out1/plan.json") == slurp(g_dir / "out2/plan.json"),
         "plan.json is byte-identical across runs");
  EXPECT(fs::exists(g_dir / "out1/plan_summary.txt"), "summary written");

  EXPECT(run("check --plan " + (g_dir / "out1/plan.json").string()) == 0,
         "independent checker accepts the emitted plan");

  // a nontrivial plan also round-trips through the checker
  write(g_dir / "plan_cfg2.json", R"({
    "alpha": 2.0, "epsilon": 0.5,
    "potential": {"L": 2.0, "d": 1},
    "process": "overdamped_sc", "mode": "bidirectional"
  })");
  EXPECT(run("plan --config " + (g_dir / "plan_cfg2.json").string() + " --seed 1 --out " +
             (g_dir / "out3").string()) == 0,
         "bidirectional plan exits 0");
  EXPECT(run("check --plan " + (g_dir / "out3/plan.json").string()) == 0,
         "checker accepts the bidirectional plan");

  // --c overrides the planner constant and lands in the plan
  EXPECT(run("plan --config " + (g_dir / "plan_cfg2.json").string() + " --seed 1 --c 1.5 --out " +
             (g_dir / "out4").string()) == 0,
         "plan with --c override exits 0");
  EXPECT(json::parse(slurp(g_dir / "out4/plan.json")).at("c").get<double>() == 1.5,
         "plan records the overridden c");
}

void test_plan_infeasible() {
  write(g_dir / "bad_cfg.json", R"({
    "alpha": 4.0, "epsilon": 0.0001,
    "potential": {"L": 2000.0, "d": 10},
    "process": "overdamped_sc", "mode": "one_sided"
  })");
  EXPECT(run("plan --config " + (g_dir / "bad_cfg.json").string() + " --seed 1 --out " +
             (g_dir / "outbad").string()) == 2,
         "infeasible plan exits 2");
  const std::string err = slurp(g_dir / "stderr.txt");
  EXPECT(err.find("c1") != std::string::npos, "diagnostic names the violated inequality");

  // missing tau for an underdamped plan is a config error
  write(g_dir / "ud_cfg.json", R"({
    "alpha": 2.0, "epsilon": 0.5,
    "potential": {"L": 2.0, "d": 1},
    "process": "underdamped", "mode": "one_sided", "gamma": 2.0, "mu": 1.0
  })");
  EXPECT(run("plan --config " + (g_dir / "ud_cfg.json").string() + " --seed 1 --out " +
             (g_dir / "outud").string()) == 1,
         "missing tau exits 1");
}

void test_sample() {
  // zero chains: header only
  write(g_dir / "sample0.json", R"({
    "plan": ")" + (g_dir / "out1/plan.json").string() + R"(",
    "potential": {"kind": "gaussian", "precision": [[1,0,0],[0,1,0],[0,0,1]]},
    "n_chains": 0
  })");
  EXPECT(run("sample --config " + (g_dir / "sample0.json").string() + " --seed 7 --out " +
             (g_dir / "s0").string()) == 0,
         "sample with zero chains exits 0");
  EXPECT(slurp(g_dir / "s0/samples.csv") == "chain,x1,x2,x3\n", "empty CSV keeps the header");

  // fixed seed gives identical output
  write(g_dir / "sample1.json", R"({
    "plan": ")" + (g_dir / "out1/plan.json").string() + R"(",
    "potential": {"kind": "gaussian", "precision": [[1,0,0],[0,1,0],[0,0,1]]},
    "n_chains": 50
  })");
  EXPECT(run("sample --config " + (g_dir / "sample1.json").string() + " --seed 7 --out " +
             (g_dir / "s1").string()) == 0,
         "sample run a exits 0");
  EXPECT(run("sample --config " + (g_dir / "sample1.json").string() + " --seed 7 --out " +
             (g_dir / "s2").string()) == 0,
         "sample run b exits 0");
  EXPECT(slurp(g_dir / "s1/samples.csv") == slurp(g_dir / "s2/samples.csv"),
         "samples.csv is reproducible under a fixed seed");
  const json manifest = json::parse(slurp(g_dir / "s1/manifest.json"));
  EXPECT(manifest.at("seed").get<int>() == 7, "manifest echoes the seed");
  EXPECT(!manifest.at("plan_hash").get<std::string>().empty(), "manifest carries the plan hash");

  // a crafted finite-T plan runs the chain; variance tracks the AR(1) oracle
  auto plan = ldp::planner::plan_from_json(slurp(g_dir / "out1/plan.json"));
  plan.eta = 0.1;
  plan.T = 100;
  plan.draw_initial_directly = false;
  write(g_dir / "crafted_plan.json", ldp::planner::plan_to_json(plan));
  write(g_dir / "sample2.json", R"({
    "plan": ")" + (g_dir / "crafted_plan.json").string() + R"(",
    "potential": {"kind": "gaussian", "precision": [[1,0,0],[0,1,0],[0,0,1]]},
    "n_chains": 2000
  })");
  EXPECT(run("sample --config " + (g_dir / "sample2.json").string() + " --seed 11 --out " +
             (g_dir / "s3").string()) == 0,
         "finite-T sample exits 0");
  std::ifstream csv((g_dir / "s3/samples.csv").string());
  std::string line;
  std::getline(csv, line);  // header
  double sum = 0.0, sum_sq = 0.0;
  long n = 0;
  while (std::getline(csv, line)) {
    const auto c1 = line.find(','), c2 = line.find(',', line.find(',') + 1);
    const double x = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  EXPECT(n == 2000, "all chains emitted");
  const double var = sum_sq / n - (sum / n) * (sum / n);
  const auto law = ldp::validation::ar1_oracle(0.1, 100, 0.0, 1.0, 1.0);
  EXPECT(std::abs(var - law.variance) <= 3.0 * law.variance * std::sqrt(2.0 / (n - 1.0)),
         "sample variance within 3 SE of the AR(1) oracle");

  // metadata mismatch is refused (canonical smoothness 4 against the plan's 1)
  write(g_dir / "sample3.json", R"({
    "plan": ")" + (g_dir / "out1/plan.json").string() + R"(",
    "potential": {"kind": "gaussian", "precision": [[1,0,0],[0,1,0],[0,0,4]]},
    "n_chains": 1
  })");
  EXPECT(run("sample --config " + (g_dir / "sample3.json").string() + " --seed 7 --out " +
             (g_dir / "s4").string()) == 1,
         "plan/potential mismatch exits 1");
}

void test_underdamped_sample() {
  write(g_dir / "ud_plan_cfg.json", R"({
    "alpha": 2.0, "epsilon": 0.5,
    "potential": {"L": 2.0, "d": 1},
    "process": "underdamped", "mode": "one_sided",
    "tau": 2.5, "gamma": 2.0, "mu": 1.0
  })");
  EXPECT(run("plan --config " + (g_dir / "ud_plan_cfg.json").string() + " --seed 2 --out " +
             (g_dir / "ud").string()) == 0,
         "underdamped plan exits 0");
  EXPECT(run("check --plan " + (g_dir / "ud/plan.json").string()) == 0,
         "checker accepts the underdamped plan");
  write(g_dir / "ud_sample.json", R"({
    "plan": ")" + (g_dir / "ud/plan.json").string() + R"(",
    "potential": {"kind": "gaussian", "precision": [[2.0]], "declared_m": 1.0},
    "n_chains": 400
  })");
  EXPECT(run("sample --config " + (g_dir / "ud_sample.json").string() + " --seed 6 --out " +
             (g_dir / "uds").string() + " --threads 2") == 0,
         "underdamped sample exits 0");
  std::ifstream csv((g_dir / "uds/samples.csv").string());
  std::string line;
  std::getline(csv, line);
  double sum = 0.0, sum_sq = 0.0;
  long n = 0;
  while (std::getline(csv, line)) {
    const double x = std::stod(line.substr(line.find(',') + 1));
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  EXPECT(n == 400, "all underdamped chains emitted");
  const double var = sum_sq / n - (sum / n) * (sum / n);
  // x-marginal of the stationary law is close to 1/L for small eta
  EXPECT(std::abs(var - 0.5) <= 0.25 * 0.5, "underdamped sample variance near 1/L");
}

void test_validate() {
  write(g_dir / "val.json", R"({"suite": "ar1", "trials": 1000})");
  EXPECT(run("validate --config " + (g_dir / "val.json").string() + " --seed 5 --out " +
             (g_dir / "v1").string()) == 0,
         "ar1 suite passes");
  EXPECT(fs::exists(g_dir / "v1/report.json"), "report.json written");
  const std::string summary = slurp(g_dir / "v1/summary.csv");
  EXPECT(summary.rfind("suite,case,metric,value,threshold,pass\n", 0) == 0,
         "summary.csv has the tidy header");

  write(g_dir / "val_bad.json", R"({"suite": "no_such_suite"})");
  EXPECT(run("validate --config " + (g_dir / "val_bad.json").string() + " --seed 5 --out " +
             (g_dir / "v2").string()) == 1,
         "unknown suite exits 1");

  write(g_dir / "val_empty.json", R"({"suites": []})");
  EXPECT(run("validate --config " + (g_dir / "val_empty.json").string() + " --seed 5 --out " +
             (g_dir / "v3").string()) == 1,
         "empty suite list exits 1");
}

void test_posterior() {
  // 20 synthetic unit-interval records
  std::string csv;
  for (int i = 0; i < 20; ++i) csv += std::to_string(0.05 * i) + "\n";
  write(g_dir / "data.csv", csv);
  write(g_dir / "post.json", R"({
    "dataset_csv": ")" + (g_dir / "data.csv").string() + R"(",
    "loss": "squared_distance", "beta": 0.01, "lambda": 1.0, "norm_bound": 1.0,
    "zeta": 10.0, "delta": 0.05,
    "exact_certificate": {"zeta": 1.0, "delta": 1e-6}
  })");
  EXPECT(run("posterior --config " + (g_dir / "post.json").string() + " --seed 3 --out " +
             (g_dir / "p1").string()) == 0,
         "posterior exits 0");
  const json out = json::parse(slurp(g_dir / "p1/output.json"));
  EXPECT(out.contains("sample") && out.contains("privacy_report") && out.contains("plan"),
         "output.json carries sample, report, and plan");
  EXPECT(out.at("privacy_report").at("total").at("zeta").get<double>() == 30.0,
         "total zeta is 3 max(1, 10)");

  // the embedded plan equals a cmd_plan run with the derived (alpha, eps, L, d)
  const double L = 1.0 + 0.01 * 20.0;
  const double alpha = 1.0 + 2.0 * std::log(1.0 / 0.05) / 10.0;
  char cfg[512];
  std::snprintf(cfg, sizeof cfg,
                R"({"alpha": %.17g, "epsilon": 5.0,
                    "potential": {"L": %.17g, "d": 1},
                    "process": "overdamped_sc", "mode": "bidirectional"})",
                alpha, L);
  write(g_dir / "post_plan_cfg.json", cfg);
  EXPECT(run("plan --config " + (g_dir / "post_plan_cfg.json").string() + " --seed 1 --out " +
             (g_dir / "p2").string()) == 0,
         "derived plan exits 0");
  EXPECT(json::parse(slurp(g_dir / "p2/plan.json")) == out.at("plan"),
         "posterior plan matches cmd_plan on the derived metadata");

  // one-sided mode is refused for DP accounting
  write(g_dir / "post_onesided.json", R"({
    "dataset_csv": ")" + (g_dir / "data.csv").string() + R"(",
    "loss": "squared_distance", "beta": 0.01, "lambda": 1.0, "norm_bound": 1.0,
    "zeta": 10.0, "delta": 0.05, "mode": "one_sided",
    "exact_certificate": {"zeta": 1.0, "delta": 1e-6}
  })");
  EXPECT(run("posterior --config " + (g_dir / "post_onesided.json").string() +
             " --seed 3 --out " + (g_dir / "p3").string()) == 2,
         "one_sided posterior is refused with exit 2");
}

void test_missing_seed() {
  EXPECT(run("plan --config " + (g_dir / "plan_cfg.json").string()) != 0,
         "missing --seed is rejected");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_tests <path-to-ldp-binary>\n");
    return 2;
  }
  g_tool = argv[1];
  g_dir = fs::temp_directory_path() / "ldp_cli_tests";
  fs::remove_all(g_dir);
  fs::create_directories(g_dir);

  test_plan_roundtrip();
  test_plan_infeasible();
  test_sample();
  test_underdamped_sample();
  test_validate();
  test_posterior();
  test_missing_seed();

  if (g_failures == 0) {
    std::printf("cli_tests: all checks passed\n");
    fs::remove_all(g_dir);
    return 0;
  }
  std::fprintf(stderr, "cli_tests: %d checks failed (artifacts in %s)\n", g_failures,
               g_dir.string().c_str());
  return 1;
}
