#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldp/renyi.hpp"

namespace ldp::planner {

enum class Process { OverdampedSC, OverdampedLip, Underdamped };
enum class Mode { OneSided, Bidirectional };

std::string process_name(Process p);
std::string mode_name(Mode m);
Process process_from_name(const std::string& s);
Mode mode_from_name(const std::string& s);

// High-probability bound on the within-step movement of the strongly convex
// overdamped chain: r = c L (sqrt(d) + sqrt(ln(T/delta))) sqrt(eta).
// Requires eta <= 2/(L+1) and an initial distribution concentrated enough for
// the chain-norm recursion; the check for N(0, (1/L) I) starts is
// starting_bound_holds below. Throws on a violated precondition.
double radius_bound_sc(double c, double L, double d, std::int64_t T, double delta,
                       double eta);

// Lipschitz variant, valid from arbitrary initial distributions:
// r = c (B + sqrt(d) + sqrt(ln(T/delta))) sqrt(eta). Requires eta <= 1.
double radius_bound_lip(double c, double B, double d, std::int64_t T, double delta,
                        double eta);

// Velocity tail bound for the underdamped chain:
// v_max = c sqrt(gamma mu) (sqrt(tau d) + sqrt(ln(1/delta))); the within-step
// radius bound is then v_max * eta. Requires gamma >= 2.
double vmax_underdamped(double c, double gamma, double mu, double tau, double d,
                        double delta);

// Checks that N(0, sigma0^2 I_d) puts mass at least 1 - delta/(4(T+1)) inside
// radius (c / (2 sqrt(eta))) (sqrt(d) + sqrt(ln(T/delta))), on a log grid of
// delta in [1e-10, 0.499].
bool starting_bound_holds(double sigma0_sq, double c, double d, std::int64_t T,
                          double eta);

// Divergence growth between the coupled chains conditioned on the radius
// event: T alpha' L^2 r^2 eta / 4, times mu/gamma for the underdamped process.
// Holds in both directions.
renyi::DivergenceBound conditional_divergence_bound(Process process, std::int64_t T,
                                                    double alpha_prime, double L, double r,
                                                    double eta, double mu = 0.0,
                                                    double gamma = 1.0);

// Conditional-moment lemma: if E[Y^theta | E_delta] <= beta / delta^gamma for
// every delta in (0, 1/2), then E[Y] <= tight <= loose, with
//   tight = beta^(1/theta) (gamma^(1/(1+gamma)) + gamma^(-gamma/(1+gamma)))^((1+gamma)/theta)
//           * theta (1+gamma) / (theta (1+gamma) - 1),
//   loose = beta^(1/theta) 2^(2/theta) theta / (theta - 1).
struct MomentBound {
  double tight = 0.0;
  double loose = 0.0;
};
MomentBound moment_to_expectation_bound(double beta, double gamma, double theta);

struct UnconditionedOptions {
  Process process = Process::OverdampedSC;
  double B = 0.0;      // Lipschitz bound (OverdampedLip)
  double gamma = 0.0;  // Underdamped
  double mu = 0.0;
};

// Unconditional divergence certificate between the discrete chain at step
// size eta and the continuous process, run for continuous time tau = T eta.
//
// The order is lifted internally to alpha_eff = max(alpha, 4). Two branches:
//  - direct: alpha' = 4 alpha_eff - 2, kappa = 1, used when eps_target is
//    above 3 ln(alpha_eff)/(alpha_eff - 1) or when the pinned kappa falls
//    below 1;
//  - pinned kappa = 3 ln(alpha_eff) ln(1/eps) / ((alpha_eff - 1) eps) with
//    alpha' = 4 alpha_eff kappa - 2 otherwise.
// The certified value is (ln 15 + ln(alpha')/2) / ((alpha_eff - 1) kappa),
// valid at the requested order in both directions once the constants check
// c1(alpha') < 2 and c2 = c3 < 1 passes.
struct UnconditionedResult {
  bool feasible = false;      // constants_ok && value <= eps_target
  bool constants_ok = false;  // c1 < 2 and c2c3 < 1
  int branch = 0;             // 0 direct, 1 pinned kappa
  double alpha_eff = 0.0;
  double alpha_prime = 0.0;
  double kappa = 1.0;
  double c1 = 0.0;
  double c2c3 = 0.0;
  double value = 0.0;
  std::string violated;  // diagnostic when infeasible
};

UnconditionedResult unconditioned_divergence(double alpha, double eps_target, double tau,
                                             double eta, double L, double d, double c,
                                             const UnconditionedOptions& opt = {});

// Largest eta <= cap keeping the constants check satisfied (bisection).
double constants_boundary_eta(double alpha_prime, double tau, double L, double d,
                              double c, const UnconditionedOptions& opt, double cap);

// Largest step size (bisection, 1e-4 relative) certifying eps at the given
// order, with T = ceil(tau/eta) and eta readjusted so that T eta = tau.
// Throws InfeasibleError (naming the violated inequality) when no eta above
// the 1e-12 floor works.
struct EtaChoice {
  double eta = 0.0;
  std::int64_t T = 0;
  UnconditionedResult certificate;
  double regime_cap = 0.0;  // process-specific upper limit that applied
};
EtaChoice choose_eta(double alpha, double eps, double tau, double L, double d, double c,
                     const UnconditionedOptions& opt = {});

// Smallest target the discretization certificate can reach at tau = T eta
// (bisection over the target). Used by the monotonicity suite.
double certified_epsilon(double alpha, double tau, std::int64_t T, double L, double d,
                         double c, const UnconditionedOptions& opt = {});

// Continuous time needed for the mixing legs, derived from the explicit decay
// inequalities (never from the O-expressions). alpha and eps are the plan
// targets; the legs run at order 2 alpha for eps/3 each.
struct MixingResult {
  double tau = 0.0;
  double order = 0.0;            // 2 alpha
  double initial_one_sided = 0.0;  // (d/2) ln L
  double initial_forward = 0.0;    // d ln L, reached at t1 (bidirectional)
  double initial_reverse = 0.0;    // d ln L (bidirectional)
  double t1 = 0.0;                 // hypercontractivity warmup
  double tau_forward = 0.0;
  double tau_reverse = 0.0;
  double value_forward = 0.0;  // leg values at tau
  double value_reverse = 0.0;
};
MixingResult mixing_time(double alpha, double d, double L, double eps, Mode mode);

struct PreconditionCheck {
  std::string name;
  bool satisfied = false;
  std::string detail;
};

struct DiscretizationCert {
  bool certified = false;
  double order = 0.0;
  double target = 0.0;
  double value = 0.0;
  int branch = 0;
  double alpha_eff = 0.0, alpha_prime = 0.0, kappa = 1.0, c1 = 0.0, c2c3 = 0.0;
};

struct MixingCert {
  bool certified = false;  // underdamped and Lipschitz plans leave this false
  double order = 0.0;
  double target = 0.0;
  double t1 = 0.0;
  double tau_forward = 0.0, tau_reverse = 0.0;
  double initial_forward = 0.0, initial_reverse = 0.0;
  double value_forward = 0.0, value_reverse = 0.0;
};

struct CombinedCert {
  bool certified = false;
  double alpha = 0.0;
  double target = 0.0;
  double coefficient = 0.0;  // (alpha - 1/2)/(alpha - 1), weak triangle p = q = 2
  double value_forward = 0.0;
  double value_reverse = 0.0;  // bidirectional only
};

struct SamplingPlan {
  std::string process;
  std::string mode;
  double target_alpha = 0.0;  // after the 3/2 floor
  double requested_alpha = 0.0;
  double target_epsilon = 0.0;
  double L = 0.0;
  double d = 0.0;
  std::optional<double> B;
  double gamma = 0.0, mu = 0.0;
  double c = 2.0;
  std::string initial;  // gaussian_scaled | standard_gaussian | point_zero
  double tau = 0.0;
  double eta = 0.0;
  std::int64_t T = 0;
  bool draw_initial_directly = false;
  DiscretizationCert disc;
  MixingCert mixing;
  CombinedCert combined;
  std::vector<PreconditionCheck> checks;
};

// End-to-end plan: tau from the mixing legs (strongly convex overdamped
// processes only; Lipschitz and underdamped plans need user_tau and leave the
// mixing leg uncertified), (eta, T) from choose_eta at order 2 alpha for
// eps/3, combination through the weak triangle inequality with p = q = 2.
SamplingPlan plan_sampling(double alpha, double eps, double L, double d,
                           std::optional<double> B, Process process, Mode mode, double c,
                           std::optional<double> user_tau = {}, double gamma = 0.0,
                           double mu = 0.0);

std::string plan_to_json(const SamplingPlan& plan);
SamplingPlan plan_from_json(const std::string& text);

// FNV-1a of the serialized plan; echoed into sample manifests.
std::uint64_t plan_hash(const SamplingPlan& plan);

// Straight-line re-evaluation of every formula recorded in a plan. Lives in
// checker.cpp and deliberately repeats the arithmetic instead of calling the
// planner helpers.
struct CheckReport {
  bool ok = false;
  std::vector<std::string> failures;
};
CheckReport verify_plan(const std::string& plan_json);

}  // namespace ldp::planner
