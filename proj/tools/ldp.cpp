// Batch front door: plan, sample, validate, and run posterior mechanisms from
// JSON config files. Every command is a pure function of (config, referenced
// inputs, seed); re-runs are byte-identical. Exit codes: 0 success, 1 config
// or I/O error, 2 infeasible plan or violated precondition, 3 validation
// failure.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldp/dynamics.hpp"
#include "ldp/errors.hpp"
#include "ldp/io.hpp"
#include "ldp/planner.hpp"
#include "ldp/potentials.hpp"
#include "ldp/privacy.hpp"
#include "ldp/validation.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  std::optional<double> c_override;
};

json load_config(const std::string& path) {
  try {
    return json::parse(ldp::io::read_file(path));
  } catch (const json::exception& e) {
    throw ldp::ConfigError("config " + path + ": " + e.what());
  }
}

std::string out_path(const CommonArgs& args, const std::string& name) {
  return (std::filesystem::path(args.out_dir) / name).string();
}

ldp::planner::SamplingPlan plan_from_config(const json& cfg,
                                            const std::optional<double>& c_override) {
  const auto process = ldp::planner::process_from_name(cfg.at("process").get<std::string>());
  const auto mode = ldp::planner::mode_from_name(cfg.value("mode", "one_sided"));
  const auto& pot = cfg.at("potential");
  std::optional<double> B;
  if (pot.contains("B") && !pot.at("B").is_null()) B = pot.at("B").get<double>();
  std::optional<double> tau;
  if (cfg.contains("tau")) tau = cfg.at("tau").get<double>();
  const double c = c_override ? *c_override : cfg.value("c", 2.0);
  return ldp::planner::plan_sampling(cfg.at("alpha").get<double>(),
                                     cfg.at("epsilon").get<double>(),
                                     pot.at("L").get<double>(), pot.at("d").get<double>(), B,
                                     process, mode, c, tau, cfg.value("gamma", 0.0),
                                     cfg.value("mu", 0.0));
}

std::string plan_summary(const ldp::planner::SamplingPlan& p) {
  char buf[512];
  std::string s;
  std::snprintf(buf, sizeof buf, "process: %s  mode: %s\n", p.process.c_str(), p.mode.c_str());
  s += buf;
  std::snprintf(buf, sizeof buf, "target: alpha = %.6g, epsilon = %.6g (nats)\n",
                p.requested_alpha, p.target_epsilon);
  s += buf;
  std::snprintf(buf, sizeof buf, "potential: L = %.6g, d = %g\n", p.L, p.d);
  s += buf;
  std::snprintf(buf, sizeof buf, "tau = %.9g   eta = %.9g   T = %lld   c = %g\n", p.tau, p.eta,
                static_cast<long long>(p.T), p.c);
  s += buf;
  std::snprintf(buf, sizeof buf, "initial distribution: %s%s\n", p.initial.c_str(),
                p.draw_initial_directly ? " (drawn directly, no chain steps)" : "");
  s += buf;
  std::snprintf(buf, sizeof buf, "discretization bound at order %.6g: %.6g (target %.6g)\n",
                p.disc.order, p.disc.value, p.disc.target);
  s += buf;
  if (p.mixing.certified) {
    std::snprintf(buf, sizeof buf, "mixing bound at order %.6g: fwd %.6g rev %.6g\n",
                  p.mixing.order, p.mixing.value_forward, p.mixing.value_reverse);
    s += buf;
    std::snprintf(buf, sizeof buf, "combined bound at alpha %.6g: fwd %.6g rev %.6g <= %.6g\n",
                  p.combined.alpha, p.combined.value_forward, p.combined.value_reverse,
                  p.combined.target);
    s += buf;
  } else {
    s += "mixing leg: UNCERTIFIED (no mixing bound exists for this process)\n";
  }
  s += "checked preconditions:\n";
  for (const auto& c : p.checks)
    s += "  [" + std::string(c.satisfied ? "ok" : "FAIL") + "] " + c.name + " - " + c.detail + "\n";
  return s;
}

int cmd_plan(const CommonArgs& args) {
  const json cfg = load_config(args.config_path);
  const auto plan = plan_from_config(cfg, args.c_override);
  ldp::io::write_file_atomic(out_path(args, "plan.json"), ldp::planner::plan_to_json(plan));
  ldp::io::write_file_atomic(out_path(args, "plan_summary.txt"), plan_summary(plan));
  std::printf("plan written to %s\n", out_path(args, "plan.json").c_str());
  return 0;
}

int cmd_check(const std::string& plan_path) {
  const auto report = ldp::planner::verify_plan(ldp::io::read_file(plan_path));
  if (report.ok) {
    std::printf("accept %s\n", plan_path.c_str());
    return 0;
  }
  std::fprintf(stderr, "reject %s\n", plan_path.c_str());
  for (const auto& f : report.failures) std::fprintf(stderr, "  %s\n", f.c_str());
  return 2;
}

int cmd_sample(const CommonArgs& args) {
  const json cfg = load_config(args.config_path);
  const std::string plan_path = cfg.at("plan").get<std::string>();
  const std::string plan_text = ldp::io::read_file(plan_path);
  const auto plan = ldp::planner::plan_from_json(plan_text);

  const ldp::Potential potential =
      ldp::potential_from_config(cfg.at("potential").dump());

  // the chain runs in canonical coordinates; samples map back
  std::optional<ldp::CanonicalPotential> canonical;
  const ldp::Potential* chain_potential = &potential;
  if (potential.strong_convexity > 0.0) {
    canonical = ldp::canonicalize(potential);
    chain_potential = &canonical->canonical;
  }
  const double L = chain_potential->smoothness;
  if (std::abs(L - plan.L) > 1e-9 * std::max(1.0, plan.L) ||
      chain_potential->dim != static_cast<int>(plan.d))
    throw ldp::ConfigError("sample: potential metadata (L, d) does not match the plan");

  const std::int64_t n_chains = cfg.value("n_chains", std::int64_t{0});
  ldp::DynamicsConfig dyn;
  dyn.process = plan.process == "underdamped" ? ldp::ProcessKind::Underdamped
                                              : ldp::ProcessKind::Overdamped;
  dyn.eta = plan.eta;
  dyn.steps = plan.T;
  dyn.gamma = plan.gamma;
  dyn.mu = plan.mu;

  ldp::InitialDistribution init = ldp::InitialDistribution::standard_gaussian();
  if (plan.initial == "gaussian_scaled") init = ldp::InitialDistribution::gaussian_scaled();
  if (plan.initial == "point_zero")
    init = ldp::InitialDistribution::point_mass(ldp::Vector::Zero(chain_potential->dim));

  std::string csv = "chain";
  for (int i = 1; i <= potential.dim; ++i) csv += ",x" + std::to_string(i);
  csv += "\n";
  std::vector<std::string> rows(static_cast<size_t>(n_chains));
  ldp::validation::parallel_for_trials(n_chains, args.threads, [&](long i) {
    ldp::RngStream rng = ldp::RngStream::substream(args.seed, static_cast<std::uint64_t>(i));
    ldp::ChainState s = plan.draw_initial_directly
                            ? ldp::sample_initial(init, *chain_potential, false, rng)
                            : ldp::run_chain_final(*chain_potential, dyn, init, rng);
    const ldp::Vector x = canonical ? canonical->to_original(s.x) : s.x;
    char buf[64];
    std::string row = std::to_string(i);
    for (int k = 0; k < x.size(); ++k) {
      std::snprintf(buf, sizeof buf, ",%.17g", x(k));
      row += buf;
    }
    rows[static_cast<size_t>(i)] = row + "\n";
  });
  for (const auto& row : rows) csv += row;
  ldp::io::write_file_atomic(out_path(args, "samples.csv"), csv);

  ordered_json manifest;
  manifest["seed"] = args.seed;
  manifest["n_chains"] = n_chains;
  manifest["plan_path"] = plan_path;
  char hashbuf[32];
  std::snprintf(hashbuf, sizeof hashbuf, "%016llx",
                static_cast<unsigned long long>(ldp::planner::plan_hash(plan)));
  manifest["plan_hash"] = hashbuf;
  manifest["config"] = ordered_json::parse(cfg.dump());
  ldp::io::write_file_atomic(out_path(args, "manifest.json"), manifest.dump(2));
  std::printf("%lld samples written to %s\n", static_cast<long long>(n_chains),
              out_path(args, "samples.csv").c_str());
  return 0;
}

int cmd_validate(const CommonArgs& args) {
  const json cfg = load_config(args.config_path);
  std::vector<std::string> suites;
  if (cfg.contains("suite")) suites.push_back(cfg.at("suite").get<std::string>());
  if (cfg.contains("suites"))
    for (const auto& s : cfg.at("suites")) suites.push_back(s.get<std::string>());
  if (suites.empty()) throw ldp::ConfigError("validate: no suite named in config");

  ldp::validation::SuiteOptions opt;
  opt.seed = args.seed;
  opt.trials = cfg.value("trials", 10000L);
  opt.threads = args.threads;
  opt.sub_resolution = cfg.value("sub_resolution", 64);
  opt.c = args.c_override ? *args.c_override : cfg.value("c", 2.0);

  bool all_pass = true;
  ordered_json reports = ordered_json::array();
  std::string summary = "suite,case,metric,value,threshold,pass\n";
  for (const auto& name : suites) {
    const auto result = ldp::validation::run_suite(name, opt);
    all_pass = all_pass && result.pass;
    reports.push_back(ordered_json::parse(result.report_json));
    for (const auto& row : result.summary_rows) summary += row + "\n";
    std::printf("%-20s %s\n", name.c_str(), result.pass ? "pass" : "FAIL");
  }
  ldp::io::write_file_atomic(out_path(args, "report.json"), reports.dump(2));
  ldp::io::write_file_atomic(out_path(args, "summary.csv"), summary);
  if (!all_pass) throw ldp::ValidationFailure("one or more validation suites failed");
  return 0;
}

int cmd_posterior(const CommonArgs& args) {
  const json cfg = load_config(args.config_path);
  const auto mode = ldp::planner::mode_from_name(cfg.value("mode", "bidirectional"));

  ldp::privacy::GibbsSpec spec;
  if (cfg.contains("dataset_csv")) {
    spec.records = ldp::load_csv_records(cfg.at("dataset_csv").get<std::string>());
  } else if (cfg.contains("data")) {
    for (const auto& row : cfg.at("data")) {
      ldp::Vector v(row.size());
      for (size_t i = 0; i < row.size(); ++i) v(static_cast<Eigen::Index>(i)) = row[i].get<double>();
      spec.records.push_back(std::move(v));
    }
  }
  const std::string loss = cfg.value("loss", "squared_distance");
  if (loss == "squared_distance")
    spec.loss = ldp::privacy::Loss::SquaredDistance;
  else if (loss == "logistic")
    spec.loss = ldp::privacy::Loss::Logistic;
  else
    throw ldp::ConfigError("posterior: unknown loss '" + loss + "'");
  spec.beta = cfg.at("beta").get<double>();
  spec.lambda = cfg.at("lambda").get<double>();
  spec.norm_bound = cfg.at("norm_bound").get<double>();

  ldp::privacy::ExactCertificate cert;
  const auto& cj = cfg.at("exact_certificate");
  if (cj.contains("renyi_alpha")) {
    cert.renyi_alpha = cj.at("renyi_alpha").get<double>();
    cert.renyi_value = cj.at("renyi_value").get<double>();
  } else {
    cert.zeta = cj.at("zeta").get<double>();
    cert.delta = cj.at("delta").get<double>();
  }

  const double c = args.c_override ? *args.c_override : cfg.value("c", 2.0);
  const auto result = ldp::privacy::private_posterior_sample(
      spec, cfg.at("zeta").get<double>(), cfg.at("delta").get<double>(), cert, c, args.seed,
      mode);

  ordered_json out;
  out["sample"] = ordered_json::array();
  for (int i = 0; i < result.theta.size(); ++i) out["sample"].push_back(result.theta(i));
  out["privacy_report"] = ordered_json::parse(ldp::privacy::report_to_json(result.report));
  out["plan"] = ordered_json::parse(ldp::planner::plan_to_json(result.plan));
  out["seed"] = args.seed;
  ldp::io::write_file_atomic(out_path(args, "output.json"), out.dump(2));
  std::printf("posterior sample written to %s\n", out_path(args, "output.json").c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Langevin sampling with certified Renyi-divergence bounds"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string plan_path;

  auto add_common = [&](CLI::App* sub, bool needs_seed) {
    sub->add_option("--config", args.config_path, "JSON config file")->required();
    sub->add_option("--out", args.out_dir, "output directory");
    auto* seed = sub->add_option("--seed", args.seed, "RNG seed (runs are reproducible by construction)");
    if (needs_seed) seed->required();
    sub->add_option("--threads", args.threads, "worker threads (0 = hardware)");
    sub->add_option("--c", [&args](const std::vector<std::string>& v) {
      args.c_override = std::stod(v.front());
      return true;
    }, "override the planner constant c");
  };

  auto* plan = app.add_subcommand("plan", "compute a sampling plan with certified bounds");
  add_common(plan, true);
  auto* sample = app.add_subcommand("sample", "run chains from a plan and emit samples");
  add_common(sample, true);
  auto* validate = app.add_subcommand("validate", "run a Monte Carlo validation suite");
  add_common(validate, true);
  auto* posterior = app.add_subcommand("posterior", "differentially private posterior sampling");
  add_common(posterior, true);
  auto* check = app.add_subcommand("check", "re-verify a plan with the independent checker");
  check->add_option("--plan", plan_path, "plan.json to verify")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(plan)) return cmd_plan(args);
    if (app.got_subcommand(sample)) return cmd_sample(args);
    if (app.got_subcommand(validate)) return cmd_validate(args);
    if (app.got_subcommand(posterior)) return cmd_posterior(args);
    if (app.got_subcommand(check)) return cmd_check(plan_path);
  } catch (const ldp::InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return 2;
  } catch (const ldp::ValidationFailure& e) {
    std::fprintf(stderr, "validation failure: %s\n", e.what());
    return 3;
  } catch (const ldp::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
