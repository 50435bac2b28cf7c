#include "ldp/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "ldp/errors.hpp"

namespace ldp::planner {

std::string process_name(Process p) {
  switch (p) {
    case Process::OverdampedSC: return "overdamped_sc";
    case Process::OverdampedLip: return "overdamped_lip";
    case Process::Underdamped: return "underdamped";
  }
  return "?";
}

std::string mode_name(Mode m) {
  return m == Mode::OneSided ? "one_sided" : "bidirectional";
}

Process process_from_name(const std::string& s) {
  if (s == "overdamped_sc") return Process::OverdampedSC;
  if (s == "overdamped_lip") return Process::OverdampedLip;
  if (s == "underdamped") return Process::Underdamped;
  throw ConfigError("unknown process '" + s + "'");
}

Mode mode_from_name(const std::string& s) {
  if (s == "one_sided") return Mode::OneSided;
  if (s == "bidirectional") return Mode::Bidirectional;
  throw ConfigError("unknown mode '" + s + "'");
}

double radius_bound_sc(double c, double L, double d, std::int64_t T, double delta,
                       double eta) {
  if (eta <= 0.0 || eta > 2.0 / (L + 1.0))
    throw InfeasibleError("radius_bound_sc: eta must lie in (0, 2/(L+1)]");
  if (delta <= 0.0 || delta >= 1.0 || T < 1)
    throw std::invalid_argument("radius_bound_sc: need T >= 1 and delta in (0, 1)");
  return c * L * (std::sqrt(d) + std::sqrt(std::log(static_cast<double>(T) / delta))) *
         std::sqrt(eta);
}

double radius_bound_lip(double c, double B, double d, std::int64_t T, double delta,
                        double eta) {
  if (eta <= 0.0 || eta > 1.0)
    throw InfeasibleError("radius_bound_lip: eta must lie in (0, 1]");
  if (delta <= 0.0 || delta >= 1.0 || T < 1)
    throw std::invalid_argument("radius_bound_lip: need T >= 1 and delta in (0, 1)");
  return c * (B + std::sqrt(d) + std::sqrt(std::log(static_cast<double>(T) / delta))) *
         std::sqrt(eta);
}

double vmax_underdamped(double c, double gamma, double mu, double tau, double d,
                        double delta) {
  if (gamma < 2.0) throw InfeasibleError("vmax_underdamped: gamma must be >= 2");
  if (mu <= 0.0 || tau <= 0.0 || delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("vmax_underdamped: bad parameters");
  return c * std::sqrt(gamma * mu) *
         (std::sqrt(tau * d) + std::sqrt(std::log(1.0 / delta)));
}

bool starting_bound_holds(double sigma0_sq, double c, double d, std::int64_t T,
                          double eta) {
  if (sigma0_sq <= 0.0 || eta <= 0.0 || T < 1) return false;
  const double sigma0 = std::sqrt(sigma0_sq);
  // delta grid: 64 log-spaced points in [1e-10, 0.499]
  for (int i = 0; i < 64; ++i) {
    const double f = static_cast<double>(i) / 63.0;
    const double delta = std::exp(std::log(1e-10) * (1.0 - f) + std::log(0.499) * f);
    const double radius = c / (2.0 * std::sqrt(eta)) *
                          (std::sqrt(d) + std::sqrt(std::log(static_cast<double>(T) / delta)));
    const double s = radius / sigma0 - std::sqrt(d);
    if (s < 0.0) return false;
    const double tail = std::exp(-0.5 * s * s);  // isotropic Gaussian norm tail
    if (tail > delta / (4.0 * (static_cast<double>(T) + 1.0))) return false;
  }
  return true;
}

renyi::DivergenceBound conditional_divergence_bound(Process process, std::int64_t T,
                                                    double alpha_prime, double L, double r,
                                                    double eta, double mu, double gamma) {
  if (r < 0.0) throw std::invalid_argument("conditional_divergence_bound: r must be >= 0");
  double value = static_cast<double>(T) * alpha_prime * L * L * r * r * eta / 4.0;
  if (process == Process::Underdamped) {
    if (gamma <= 0.0) throw std::invalid_argument("conditional_divergence_bound: gamma > 0 required");
    value *= mu / gamma;
  }
  return {alpha_prime, value, renyi::Direction::Both};
}

MomentBound moment_to_expectation_bound(double beta, double gamma, double theta) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("moment_to_expectation_bound: gamma must lie in (0, 1)");
  if (!(theta > 1.0 + gamma))
    throw std::invalid_argument("moment_to_expectation_bound: theta must exceed 1 + gamma");
  if (beta <= 0.0) throw std::invalid_argument("moment_to_expectation_bound: beta must be positive");

  // With z = beta^(1/theta) A^((1+gamma)/theta), A = gamma^(1/(1+gamma)) +
  // gamma^(-gamma/(1+gamma)), the optimized tail split integrates to
  // z theta / (theta - 1 - gamma). A <= 2 gives the loose form. The last
  // factor must carry the -gamma; dropping it is refuted by the exactly
  // saturating quantile family in the validation module.
  const double a = std::pow(gamma, 1.0 / (1.0 + gamma)) + std::pow(gamma, -gamma / (1.0 + gamma));
  const double factor = theta / (theta - 1.0 - gamma);
  MomentBound out;
  out.tight = std::pow(beta, 1.0 / theta) * std::pow(a, (1.0 + gamma) / theta) * factor;
  out.loose = std::pow(beta, 1.0 / theta) * std::pow(2.0, 2.0 / theta) * factor;
  return out;
}

namespace {

struct Constants {
  double ln_c1 = 0.0;
  double c2c3 = 0.0;
};

// Exponent of c1(alpha') and the delta-exponents c2 = c3, per process.
Constants constants_for(double alpha_prime, double tau, double eta, double L, double d,
                        double c, const UnconditionedOptions& opt) {
  const double ap = alpha_prime;
  const double log_T = std::log(tau / eta);
  Constants out;
  switch (opt.process) {
    case Process::OverdampedSC:
      out.ln_c1 = 3.0 * tau * ap * (ap - 1.0) * std::pow(L, 4) * c * c * (d + 2.0 * log_T) *
                  eta / 4.0;
      out.c2c3 = 3.0 * tau * ap * (ap - 1.0) * std::pow(L, 4) * c * c * eta / 4.0;
      break;
    case Process::OverdampedLip:
      // Four-term radius (B + sqrt(d) + two log terms), hence the prefactor 4
      // instead of 3 and L^2 instead of L^4.
      out.ln_c1 = tau * ap * (ap - 1.0) * L * L * c * c * (opt.B * opt.B + d + 2.0 * log_T) * eta;
      out.c2c3 = tau * ap * (ap - 1.0) * L * L * c * c * eta;
      break;
    case Process::Underdamped:
      out.ln_c1 = 3.0 * opt.mu * tau * tau * d * ap * (ap - 1.0) * L * L * c * c * eta * eta / 4.0;
      out.c2c3 = 3.0 * opt.mu * tau * ap * (ap - 1.0) * L * L * c * c * eta * eta / 4.0;
      break;
  }
  return out;
}

constexpr double kEtaFloor = 1e-12;

}  // namespace

UnconditionedResult unconditioned_divergence(double alpha, double eps_target, double tau,
                                             double eta, double L, double d, double c,
                                             const UnconditionedOptions& opt) {
  if (alpha <= 1.0) throw std::invalid_argument("unconditioned_divergence: alpha must exceed 1");
  if (eps_target <= 0.0 || tau <= 0.0 || eta <= 0.0 || L <= 0.0 || d <= 0.0 || c <= 0.0)
    throw std::invalid_argument("unconditioned_divergence: parameters must be positive");
  if (eta > tau)
    throw std::invalid_argument("unconditioned_divergence: eta must not exceed tau");

  UnconditionedResult res;
  res.alpha_eff = std::max(alpha, 4.0);
  const double a = res.alpha_eff;
  const double threshold = 3.0 * std::log(a) / (a - 1.0);

  if (eps_target >= threshold) {
    res.branch = 0;
    res.kappa = 1.0;
  } else {
    const double kappa = 3.0 * std::log(a) * std::log(1.0 / eps_target) / ((a - 1.0) * eps_target);
    if (kappa > 1.0) {
      res.branch = 1;
      res.kappa = kappa;
    } else {
      // The pinned kappa drops below 1 in a narrow band of eps just under the
      // threshold; the direct certificate still applies there.
      res.branch = 0;
      res.kappa = 1.0;
    }
  }
  res.alpha_prime = 4.0 * a * res.kappa - 2.0;

  const Constants k = constants_for(res.alpha_prime, tau, eta, L, d, c, opt);
  res.c1 = std::exp(k.ln_c1);
  res.c2c3 = k.c2c3;
  res.constants_ok = k.ln_c1 < std::log(2.0) && k.c2c3 < 1.0;
  // ln(15 sqrt(alpha')) from the unconditioning chain, with the exact
  // conditional-moment factors 1/sqrt(1 - c3) and 1/(1 - c2/2) kept explicit; they
  // vanish as eta -> 0 and never exceed a small constant once c2 = c3 < 1.
  if (res.constants_ok) {
    res.value = (std::log(15.0) + 0.5 * std::log(res.alpha_prime) -
                 0.5 * std::log(1.0 - k.c2c3) - std::log(1.0 - k.c2c3 / 2.0)) /
                ((a - 1.0) * res.kappa);
  } else {
    res.value = std::numeric_limits<double>::infinity();
  }

  res.feasible = res.constants_ok && res.value <= eps_target;
  if (!res.constants_ok) {
    res.violated = "c1(alpha') = exp(" + std::to_string(k.ln_c1) + ") >= 2 (need < 2)";
    if (k.c2c3 >= 1.0) res.violated += "; c2 = c3 = " + std::to_string(k.c2c3) + " >= 1";
  } else if (!res.feasible) {
    res.violated = "certified value " + std::to_string(res.value) + " > target " +
                   std::to_string(eps_target);
  }
  return res;
}

double constants_boundary_eta(double alpha_prime, double tau, double L, double d,
                              double c, const UnconditionedOptions& opt, double cap) {
  auto ok = [&](double eta) {
    const Constants k = constants_for(alpha_prime, tau, eta, L, d, c, opt);
    return k.ln_c1 < std::log(2.0) && k.c2c3 < 1.0;
  };
  if (ok(cap)) return cap;
  double lo = kEtaFloor, hi = cap;
  if (!ok(lo)) return 0.0;
  while ((hi - lo) / lo > 1e-8) {
    const double mid = std::sqrt(lo * hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

EtaChoice choose_eta(double alpha, double eps, double tau, double L, double d, double c,
                     const UnconditionedOptions& opt) {
  double cap = tau;
  switch (opt.process) {
    case Process::OverdampedSC:
      cap = std::min(cap, 2.0 / (L + 1.0));
      break;
    case Process::OverdampedLip:
      cap = std::min(cap, 1.0);
      break;
    case Process::Underdamped:
      if (opt.gamma < 2.0) throw InfeasibleError("choose_eta: underdamped requires gamma >= 2");
      if (opt.mu <= 0.0) throw std::invalid_argument("choose_eta: underdamped requires mu > 0");
      cap = std::min({cap, opt.gamma / (opt.mu * L), (1.0 - 1e-12) / opt.gamma});
      break;
  }
  if (cap < kEtaFloor)
    throw InfeasibleError("choose_eta: regime cap " + std::to_string(cap) +
                          " is below the eta floor 1e-12");

  auto evaluate = [&](double eta) {
    return unconditioned_divergence(alpha, eps, tau, eta, L, d, c, opt);
  };

  const UnconditionedResult at_floor = evaluate(kEtaFloor);
  if (!at_floor.feasible)
    throw InfeasibleError("choose_eta: infeasible even at the eta floor 1e-12: " +
                          at_floor.violated);

  double eta;
  UnconditionedResult cert = evaluate(cap);
  if (cert.feasible) {
    eta = cap;
  } else {
    double lo = kEtaFloor, hi = cap;
    while ((hi - lo) / lo > 1e-4) {
      const double mid = std::sqrt(lo * hi);
      if (evaluate(mid).feasible)
        lo = mid;
      else
        hi = mid;
    }
    eta = lo;
  }

  EtaChoice out;
  out.T = static_cast<std::int64_t>(std::ceil(tau / eta - 1e-9));
  out.T = std::max<std::int64_t>(out.T, 1);
  out.eta = tau / static_cast<double>(out.T);  // keep T eta = tau exact
  out.certificate = evaluate(out.eta);
  out.regime_cap = cap;
  // The c1 exponent eta (d + 2 ln(tau/eta)) is not monotone within a factor
  // of two of tau, so rounding T up can lose feasibility right at the cap;
  // past T = 2 it decreases with T, so walking T upward recovers it.
  for (int attempt = 0; attempt < 64 && !out.certificate.feasible; ++attempt) {
    out.T += std::max<std::int64_t>(1, out.T / 64);
    out.eta = tau / static_cast<double>(out.T);
    out.certificate = evaluate(out.eta);
  }
  if (!out.certificate.feasible)
    throw InfeasibleError("choose_eta: readjusted eta lost feasibility: " +
                          out.certificate.violated);
  return out;
}

double certified_epsilon(double alpha, double tau, std::int64_t T, double L, double d,
                         double c, const UnconditionedOptions& opt) {
  if (T < 1) throw std::invalid_argument("certified_epsilon: T must be >= 1");
  const double eta = tau / static_cast<double>(T);
  auto feasible = [&](double eps) {
    return unconditioned_divergence(alpha, eps, tau, eta, L, d, c, opt).feasible;
  };
  double lo = 1e-10, hi = 1e6;
  if (!feasible(hi)) return std::numeric_limits<double>::infinity();
  if (feasible(lo)) return lo;
  // first feasible point on a geometric grid, then bisect
  double prev = lo;
  double first = hi;
  for (int i = 1; i <= 320; ++i) {
    const double eps = lo * std::pow(hi / lo, static_cast<double>(i) / 320.0);
    if (feasible(eps)) {
      first = eps;
      break;
    }
    prev = eps;
  }
  double a = prev, b = first;
  while ((b - a) / b > 1e-6) {
    const double mid = std::sqrt(a * b);
    (feasible(mid) ? b : a) = mid;
  }
  return b;
}

MixingResult mixing_time(double alpha, double d, double L, double eps, Mode mode) {
  if (alpha < 1.5) throw std::invalid_argument("mixing_time: alpha must be >= 3/2");
  if (d <= 0.0 || L < 1.0 || eps <= 0.0)
    throw std::invalid_argument("mixing_time: need d > 0, L >= 1, eps > 0");

  MixingResult out;
  out.order = 2.0 * alpha;
  const double target = eps / 3.0;

  if (mode == Mode::OneSided) {
    const double initial = 0.5 * d * std::log(L);
    out.initial_one_sided = initial;
    out.tau = initial <= target ? 0.0 : alpha * std::log(3.0 * initial / eps);
    out.tau_forward = out.tau;
    out.value_forward = initial * std::exp(-out.tau / alpha);
    return out;
  }

  const double initial = d * std::log(L);
  out.initial_forward = initial;
  out.initial_reverse = initial;
  if (initial <= 0.0) return out;  // target is the standard Gaussian itself

  out.t1 = 0.5 * std::log((2.0 * alpha - 1.0) * L);
  out.tau_forward =
      out.t1 + (initial <= target ? 0.0 : alpha * std::log(3.0 * initial / eps));
  out.tau_reverse = initial <= target ? 0.0 : 2.0 * alpha * std::log(3.0 * initial / eps);
  out.tau = std::max(out.tau_forward, out.tau_reverse);
  out.value_forward = initial * std::exp(-(out.tau - out.t1) / alpha);
  out.value_reverse = initial * std::exp(-out.tau / (2.0 * alpha));
  return out;
}

namespace {

std::string initial_name_for(Process process, Mode mode) {
  if (process == Process::Underdamped) return "point_zero";
  if (process == Process::OverdampedLip) return "gaussian_scaled";
  return mode == Mode::OneSided ? "gaussian_scaled" : "standard_gaussian";
}

}  // namespace

SamplingPlan plan_sampling(double alpha, double eps, double L, double d,
                           std::optional<double> B, Process process, Mode mode, double c,
                           std::optional<double> user_tau, double gamma, double mu) {
  if (eps <= 0.0) throw std::invalid_argument("plan_sampling: eps must be positive");
  if (L < 1.0) throw std::invalid_argument("plan_sampling: canonical potentials have L >= 1");
  if (alpha <= 1.0) throw std::invalid_argument("plan_sampling: alpha must exceed 1");
  if (process == Process::OverdampedLip && !B)
    throw ConfigError("plan_sampling: Lipschitz process needs the bound B");

  SamplingPlan plan;
  plan.process = process_name(process);
  plan.mode = mode_name(mode);
  plan.requested_alpha = alpha;
  plan.target_alpha = std::max(alpha, 1.5);  // smaller orders are lifted, monotonicity covers them
  plan.target_epsilon = eps;
  plan.L = L;
  plan.d = d;
  plan.B = B;
  plan.gamma = gamma;
  plan.mu = mu;
  plan.c = c;
  plan.initial = initial_name_for(process, mode);

  const double order = 2.0 * plan.target_alpha;
  const double disc_target = eps / 3.0;

  UnconditionedOptions opt;
  opt.process = process;
  opt.B = B.value_or(0.0);
  opt.gamma = gamma;
  opt.mu = mu;

  // mixing leg
  if (process == Process::OverdampedSC) {
    if (user_tau)
      throw ConfigError("plan_sampling: tau is derived for strongly convex overdamped plans");
    const MixingResult mix = mixing_time(plan.target_alpha, d, L, eps, mode);
    plan.tau = mix.tau;
    plan.mixing.certified = true;
    plan.mixing.order = order;
    plan.mixing.target = disc_target;
    plan.mixing.t1 = mix.t1;
    plan.mixing.tau_forward = mix.tau_forward;
    plan.mixing.tau_reverse = mix.tau_reverse;
    plan.mixing.initial_forward =
        mode == Mode::OneSided ? mix.initial_one_sided : mix.initial_forward;
    plan.mixing.initial_reverse = mix.initial_reverse;
    plan.mixing.value_forward = mix.value_forward;
    plan.mixing.value_reverse = mix.value_reverse;
  } else {
    if (!user_tau || *user_tau <= 0.0)
      throw ConfigError(
          "plan_sampling: " + plan.process +
          " plans need an explicit tau; no certified mixing time exists for them");
    plan.tau = *user_tau;
    plan.mixing.certified = false;
    plan.mixing.order = order;
    plan.mixing.target = disc_target;
  }

  // discretization leg
  plan.disc.order = order;
  plan.disc.target = disc_target;
  if (plan.tau == 0.0) {
    plan.T = 0;
    plan.eta = 0.0;
    plan.draw_initial_directly = true;
    plan.disc.certified = true;
    plan.disc.value = 0.0;
    plan.disc.alpha_eff = std::max(order, 4.0);
    plan.disc.alpha_prime = 4.0 * plan.disc.alpha_eff - 2.0;
    plan.disc.kappa = 1.0;
    plan.disc.c1 = 1.0;
    plan.disc.c2c3 = 0.0;
  } else {
    const EtaChoice choice = choose_eta(order, disc_target, plan.tau, L, d, c, opt);
    plan.eta = choice.eta;
    plan.T = choice.T;
    plan.disc.certified = true;
    plan.disc.value = choice.certificate.value;
    plan.disc.branch = choice.certificate.branch;
    plan.disc.alpha_eff = choice.certificate.alpha_eff;
    plan.disc.alpha_prime = choice.certificate.alpha_prime;
    plan.disc.kappa = choice.certificate.kappa;
    plan.disc.c1 = choice.certificate.c1;
    plan.disc.c2c3 = choice.certificate.c2c3;
  }

  // precondition ledger
  auto check = [&](std::string name, bool ok, std::string detail) {
    plan.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  if (plan.T > 0) {
    switch (process) {
      case Process::OverdampedSC: {
        check("eta <= 2/(L+1)", plan.eta <= 2.0 / (L + 1.0),
              "eta = " + std::to_string(plan.eta));
        const double sigma0_sq = mode == Mode::OneSided ? 1.0 / L : 1.0;
        check("startingbound",
              starting_bound_holds(sigma0_sq, c, d, plan.T, plan.eta),
              "initial N(0, " + std::to_string(sigma0_sq) +
                  " I); grid-checked on 64 log-spaced delta in [1e-10, 0.499]");
        break;
      }
      case Process::OverdampedLip:
        check("eta <= 1", plan.eta <= 1.0, "eta = " + std::to_string(plan.eta));
        check("arbitrary initial distribution allowed", true,
              "the Lipschitz radius bound needs no starting condition");
        break;
      case Process::Underdamped:
        check("gamma >= 2", gamma >= 2.0, "gamma = " + std::to_string(gamma));
        check("eta <= gamma/(mu L)", plan.eta <= gamma / (mu * L),
              "eta = " + std::to_string(plan.eta));
        check("gamma eta < 1", gamma * plan.eta < 1.0,
              "gamma eta = " + std::to_string(gamma * plan.eta));
        check("startingbound-ud", true,
              "point mass at (0, 0) with f(0) = 0 gives zero initial Hamiltonian");
        break;
    }
    for (const auto& pc : plan.checks)
      if (!pc.satisfied)
        throw InfeasibleError("plan_sampling: precondition failed: " + pc.name + " (" +
                              pc.detail + ")");
  }

  // combination through the weak triangle, p = q = 2
  plan.combined.alpha = plan.target_alpha;
  plan.combined.target = eps;
  plan.combined.coefficient = (plan.target_alpha - 0.5) / (plan.target_alpha - 1.0);
  if (plan.mixing.certified) {
    const renyi::DivergenceBound disc_bound{order, plan.disc.value, renyi::Direction::Both};
    const renyi::DivergenceCurve disc_curve{{{order, plan.disc.value}}, renyi::Direction::Both};
    const renyi::DivergenceCurve mix_fwd{{{order, plan.mixing.value_forward}},
                                         renyi::Direction::Forward};
    const auto fwd = renyi::weak_triangle(
        plan.target_alpha, 2.0, disc_bound, renyi::curve_lookup(mix_fwd, order - 1.0));
    plan.combined.value_forward = fwd.value;
    if (mode == Mode::Bidirectional) {
      const renyi::DivergenceBound rev_mix{order, plan.mixing.value_reverse,
                                           renyi::Direction::Forward};
      const auto rev = renyi::weak_triangle(plan.target_alpha, 2.0, rev_mix,
                                            renyi::curve_lookup(disc_curve, order - 1.0));
      plan.combined.value_reverse = rev.value;
    }
    const double worst = std::max(plan.combined.value_forward,
                                  mode == Mode::Bidirectional ? plan.combined.value_reverse : 0.0);
    plan.combined.certified = worst <= eps * (1.0 + 1e-12);
    if (!plan.combined.certified)
      throw InfeasibleError("plan_sampling: combined bound " + std::to_string(worst) +
                            " exceeds target " + std::to_string(eps));
  }
  return plan;
}

namespace {

nlohmann::ordered_json checks_to_json(const std::vector<PreconditionCheck>& checks) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name}, {"satisfied", c.satisfied}, {"detail", c.detail}});
  return arr;
}

}  // namespace

std::string plan_to_json(const SamplingPlan& p) {
  nlohmann::ordered_json j;
  j["format"] = "ldp-plan-v1";
  j["process"] = p.process;
  j["mode"] = p.mode;
  j["target"] = {{"alpha", p.requested_alpha},
                 {"alpha_effective", p.target_alpha},
                 {"epsilon", p.target_epsilon}};
  j["potential"] = {{"L", p.L},
                    {"d", p.d},
                    {"B", p.B ? nlohmann::ordered_json(*p.B) : nlohmann::ordered_json(nullptr)},
                    {"gamma", p.gamma},
                    {"mu", p.mu}};
  j["c"] = p.c;
  j["initial"] = p.initial;
  j["tau"] = p.tau;
  j["eta"] = p.eta;
  j["T"] = p.T;
  j["draw_initial_directly"] = p.draw_initial_directly;
  const char* c1_formula =
      p.process == "overdamped_sc"
          ? "c1 = exp(3 tau a'(a'-1) L^4 c^2 (d + 2 ln(tau/eta)) eta / 4)"
          : (p.process == "overdamped_lip"
                 ? "c1 = exp(tau a'(a'-1) L^2 c^2 (B^2 + d + 2 ln(tau/eta)) eta)"
                 : "c1 = exp(3 mu tau^2 d a'(a'-1) L^2 c^2 eta^2 / 4)");
  j["discretization"] = {{"certified", p.disc.certified},
                         {"formula",
                          std::string("value = (ln 15 + ln(a')/2 - ln(1-c3)/2 - ln(1-c2/2)) / "
                                      "((a_eff-1) kappa); a' = 4 a_eff kappa - 2; ") +
                              c1_formula},
                         {"order", p.disc.order},
                         {"target", p.disc.target},
                         {"value", p.disc.value},
                         {"branch", p.disc.branch},
                         {"alpha_eff", p.disc.alpha_eff},
                         {"alpha_prime", p.disc.alpha_prime},
                         {"kappa", p.disc.kappa},
                         {"c1", p.disc.c1},
                         {"c2c3", p.disc.c2c3}};
  j["mixing"] = {{"certified", p.mixing.certified},
                 {"formula",
                  p.mode == "one_sided"
                      ? "tau: e^(-tau/alpha) (d/2) ln L <= eps/3 at order 2 alpha"
                      : "forward: warmup t1 = ln((2 alpha - 1) L)/2 to d ln L, then "
                        "e^(-(tau-t1)/alpha); reverse: e^(-tau/(2 alpha)) d ln L"},
                 {"order", p.mixing.order},
                 {"target", p.mixing.target},
                 {"t1", p.mixing.t1},
                 {"tau_forward", p.mixing.tau_forward},
                 {"tau_reverse", p.mixing.tau_reverse},
                 {"initial_forward", p.mixing.initial_forward},
                 {"initial_reverse", p.mixing.initial_reverse},
                 {"value_forward", p.mixing.value_forward},
                 {"value_reverse", p.mixing.value_reverse}};
  j["combined"] = {{"certified", p.combined.certified},
                   {"formula",
                    "triangle with p = q = 2: D_alpha <= ((alpha-1/2)/(alpha-1)) "
                    "D_{2 alpha} + D_{2 alpha - 1}"},
                   {"alpha", p.combined.alpha},
                   {"target", p.combined.target},
                   {"coefficient", p.combined.coefficient},
                   {"value_forward", p.combined.value_forward},
                   {"value_reverse", p.combined.value_reverse}};
  j["preconditions"] = checks_to_json(p.checks);
  return j.dump(2);
}

SamplingPlan plan_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("plan_from_json: ") + e.what());
  }
  if (j.value("format", "") != "ldp-plan-v1")
    throw ConfigError("plan_from_json: unknown plan format");

  SamplingPlan p;
  p.process = j.at("process").get<std::string>();
  p.mode = j.at("mode").get<std::string>();
  p.requested_alpha = j.at("target").at("alpha").get<double>();
  p.target_alpha = j.at("target").at("alpha_effective").get<double>();
  p.target_epsilon = j.at("target").at("epsilon").get<double>();
  p.L = j.at("potential").at("L").get<double>();
  p.d = j.at("potential").at("d").get<double>();
  if (!j.at("potential").at("B").is_null()) p.B = j.at("potential").at("B").get<double>();
  p.gamma = j.at("potential").at("gamma").get<double>();
  p.mu = j.at("potential").at("mu").get<double>();
  p.c = j.at("c").get<double>();
  p.initial = j.at("initial").get<std::string>();
  p.tau = j.at("tau").get<double>();
  p.eta = j.at("eta").get<double>();
  p.T = j.at("T").get<std::int64_t>();
  p.draw_initial_directly = j.at("draw_initial_directly").get<bool>();
  const auto& dj = j.at("discretization");
  p.disc = {dj.at("certified").get<bool>(), dj.at("order").get<double>(),
            dj.at("target").get<double>(), dj.at("value").get<double>(),
            dj.at("branch").get<int>(),    dj.at("alpha_eff").get<double>(),
            dj.at("alpha_prime").get<double>(), dj.at("kappa").get<double>(),
            dj.at("c1").get<double>(),     dj.at("c2c3").get<double>()};
  const auto& mj = j.at("mixing");
  p.mixing = {mj.at("certified").get<bool>(),
              mj.at("order").get<double>(),
              mj.at("target").get<double>(),
              mj.at("t1").get<double>(),
              mj.at("tau_forward").get<double>(),
              mj.at("tau_reverse").get<double>(),
              mj.at("initial_forward").get<double>(),
              mj.at("initial_reverse").get<double>(),
              mj.at("value_forward").get<double>(),
              mj.at("value_reverse").get<double>()};
  const auto& cj = j.at("combined");
  p.combined = {cj.at("certified").get<bool>(),   cj.at("alpha").get<double>(),
                cj.at("target").get<double>(),    cj.at("coefficient").get<double>(),
                cj.at("value_forward").get<double>(), cj.at("value_reverse").get<double>()};
  for (const auto& pc : j.at("preconditions"))
    p.checks.push_back({pc.at("name").get<std::string>(), pc.at("satisfied").get<bool>(),
                        pc.at("detail").get<std::string>()});
  return p;
}

std::uint64_t plan_hash(const SamplingPlan& plan) {
  const std::string s = plan_to_json(plan);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ldp::planner
