#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "ldp/errors.hpp"
#include "ldp/planner.hpp"

// Independent plan checker. Every formula in the plan is re-evaluated here as
// straight-line arithmetic from the recorded inputs; nothing is shared with
// the planner's own helpers on purpose.

namespace ldp::planner {

namespace {

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

struct Checker {
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void require_close(double got, double want, const std::string& what) {
    if (!close(got, want))
      failures.push_back(what + ": recorded " + std::to_string(got) + ", recomputed " +
                         std::to_string(want));
  }
};

}  // namespace

CheckReport verify_plan(const std::string& plan_json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(plan_json);
  } catch (const nlohmann::json::exception& e) {
    return {false, {std::string("unparseable plan: ") + e.what()}};
  }

  Checker ck;
  const std::string process = j.at("process").get<std::string>();
  const std::string mode = j.at("mode").get<std::string>();
  const double requested_alpha = j.at("target").at("alpha").get<double>();
  const double alpha = j.at("target").at("alpha_effective").get<double>();
  const double eps = j.at("target").at("epsilon").get<double>();
  const double L = j.at("potential").at("L").get<double>();
  const double d = j.at("potential").at("d").get<double>();
  const double B = j.at("potential").at("B").is_null()
                       ? 0.0
                       : j.at("potential").at("B").get<double>();
  const double gamma = j.at("potential").at("gamma").get<double>();
  const double mu = j.at("potential").at("mu").get<double>();
  const double c = j.at("c").get<double>();
  const double tau = j.at("tau").get<double>();
  const double eta = j.at("eta").get<double>();
  const std::int64_t T = j.at("T").get<std::int64_t>();

  ck.require_close(alpha, std::max(requested_alpha, 1.5), "alpha floor at 3/2");
  const double order = 2.0 * alpha;
  const double leg_target = eps / 3.0;
  ck.require_close(j.at("discretization").at("order").get<double>(), order,
                   "discretization order = 2 alpha");
  ck.require_close(j.at("discretization").at("target").get<double>(), leg_target,
                   "discretization target = eps/3");

  // mixing leg
  const auto& mj = j.at("mixing");
  const bool mixing_certified = mj.at("certified").get<bool>();
  if (process == "overdamped_sc") {
    ck.require(mixing_certified, "strongly convex overdamped plans certify mixing");
    if (mode == "one_sided") {
      const double initial = 0.5 * d * std::log(L);
      const double want_tau =
          initial <= leg_target ? 0.0 : alpha * std::log(3.0 * initial / eps);
      ck.require_close(tau, want_tau, "one-sided tau = alpha ln(3 d ln L / (2 eps))");
      ck.require_close(mj.at("initial_forward").get<double>(), initial,
                       "one-sided initial bound (d/2) ln L");
      const double value = initial * std::exp(-tau / alpha);
      ck.require_close(mj.at("value_forward").get<double>(), value,
                       "forward mixing decay e^{-tau/alpha}");
      ck.require(value <= leg_target * (1.0 + 1e-12), "forward mixing leg <= eps/3");
    } else {
      const double initial = d * std::log(L);
      ck.require_close(mj.at("initial_forward").get<double>(), initial,
                       "bidirectional initial bound d ln L");
      if (initial > 0.0) {
        const double t1 = 0.5 * std::log((2.0 * alpha - 1.0) * L);
        ck.require_close(mj.at("t1").get<double>(), t1,
                         "hypercontractivity warmup t1 = ln((2 alpha - 1) L)/2");
        const double tau_fwd =
            t1 + (initial <= leg_target ? 0.0 : alpha * std::log(3.0 * initial / eps));
        const double tau_rev =
            initial <= leg_target ? 0.0 : 2.0 * alpha * std::log(3.0 * initial / eps);
        ck.require_close(mj.at("tau_forward").get<double>(), tau_fwd, "forward leg time");
        ck.require_close(mj.at("tau_reverse").get<double>(), tau_rev, "reverse leg time");
        ck.require_close(tau, std::max(tau_fwd, tau_rev), "tau = max of the two legs");
        const double vf = initial * std::exp(-(tau - t1) / alpha);
        const double vr = initial * std::exp(-tau / (2.0 * alpha));
        ck.require_close(mj.at("value_forward").get<double>(), vf, "forward leg value");
        ck.require_close(mj.at("value_reverse").get<double>(), vr, "reverse leg value");
        ck.require(vf <= leg_target * (1.0 + 1e-12), "forward mixing leg <= eps/3");
        ck.require(vr <= leg_target * (1.0 + 1e-12), "reverse mixing leg <= eps/3");
      } else {
        ck.require(tau == 0.0, "L = 1 means tau = 0");
      }
    }
  } else {
    ck.require(!mixing_certified,
               process + " plans must mark the mixing leg as uncertified");
    ck.require(tau > 0.0, "explicit tau required for " + process);
  }

  // discretization leg
  const auto& dj = j.at("discretization");
  if (j.at("draw_initial_directly").get<bool>() || T == 0) {
    ck.require(T == 0 && tau == 0.0, "draw_initial_directly means T = 0 and tau = 0");
    ck.require_close(dj.at("value").get<double>(), 0.0, "zero-step discretization bound");
  } else {
    ck.require(T >= 1, "T >= 1");
    ck.require_close(static_cast<double>(T) * eta, tau, "T eta = tau");
    ck.require(static_cast<double>(T - 1) * eta < tau * (1.0 + 1e-12), "T = ceil(tau/eta)");

    const double a_eff = std::max(order, 4.0);
    ck.require_close(dj.at("alpha_eff").get<double>(), a_eff, "alpha_eff = max(order, 4)");
    const double threshold = 3.0 * std::log(a_eff) / (a_eff - 1.0);
    const int branch = dj.at("branch").get<int>();
    double kappa = 1.0;
    if (branch == 1) {
      kappa = 3.0 * std::log(a_eff) * std::log(1.0 / leg_target) / ((a_eff - 1.0) * leg_target);
      ck.require(leg_target < threshold, "pinned-kappa branch requires eps/3 below 3 ln a/(a-1)");
      ck.require(kappa > 1.0, "pinned kappa must exceed 1");
    } else {
      const double pinned =
          3.0 * std::log(a_eff) * std::log(1.0 / leg_target) / ((a_eff - 1.0) * leg_target);
      ck.require(leg_target >= threshold || pinned <= 1.0,
                 "direct branch applies above the threshold or when the pinned kappa <= 1");
    }
    ck.require_close(dj.at("kappa").get<double>(), kappa, "kappa");
    const double alpha_prime = 4.0 * a_eff * kappa - 2.0;
    ck.require_close(dj.at("alpha_prime").get<double>(), alpha_prime,
                     "alpha' = 4 alpha_eff kappa - 2");

    double ln_c1 = 0.0, c2c3 = 0.0;
    if (process == "overdamped_sc") {
      ln_c1 = 3.0 * tau * alpha_prime * (alpha_prime - 1.0) * L * L * L * L * c * c *
              (d + 2.0 * std::log(tau / eta)) * eta / 4.0;
      c2c3 = 3.0 * tau * alpha_prime * (alpha_prime - 1.0) * L * L * L * L * c * c * eta / 4.0;
    } else if (process == "overdamped_lip") {
      ln_c1 = tau * alpha_prime * (alpha_prime - 1.0) * L * L * c * c *
              (B * B + d + 2.0 * std::log(tau / eta)) * eta;
      c2c3 = tau * alpha_prime * (alpha_prime - 1.0) * L * L * c * c * eta;
    } else if (process == "underdamped") {
      ln_c1 = 3.0 * mu * tau * tau * d * alpha_prime * (alpha_prime - 1.0) * L * L * c * c *
              eta * eta / 4.0;
      c2c3 = 3.0 * mu * tau * alpha_prime * (alpha_prime - 1.0) * L * L * c * c * eta * eta / 4.0;
    } else {
      ck.require(false, "unknown process " + process);
    }
    ck.require_close(dj.at("c1").get<double>(), std::exp(ln_c1), "c1(alpha')");
    ck.require_close(dj.at("c2c3").get<double>(), c2c3, "c2 = c3");
    ck.require(ln_c1 < std::log(2.0), "c1(alpha') < 2");
    ck.require(c2c3 < 1.0, "c2 = c3 < 1");

    const double value = (std::log(15.0) + 0.5 * std::log(alpha_prime) -
                          0.5 * std::log(1.0 - c2c3) - std::log(1.0 - c2c3 / 2.0)) /
                         ((a_eff - 1.0) * kappa);
    ck.require_close(dj.at("value").get<double>(), value, "discretization value");
    ck.require(value <= leg_target * (1.0 + 1e-12), "discretization value <= eps/3");

    // regime guards
    if (process == "overdamped_sc") {
      ck.require(eta <= 2.0 / (L + 1.0) * (1.0 + 1e-12), "eta <= 2/(L+1)");
      const double sigma0_sq = mode == "one_sided" ? 1.0 / L : 1.0;
      ck.require(starting_bound_holds(sigma0_sq, c, d, T, eta),
                 "initial distribution satisfies the starting concentration bound");
    } else if (process == "overdamped_lip") {
      ck.require(eta <= 1.0 + 1e-12, "eta <= 1");
    } else if (process == "underdamped") {
      ck.require(gamma >= 2.0, "gamma >= 2");
      ck.require(eta <= gamma / (mu * L) * (1.0 + 1e-12), "eta <= gamma/(mu L)");
      ck.require(gamma * eta < 1.0, "gamma eta < 1");
    }
  }

  // weak-triangle combination, p = q = 2
  const auto& cj = j.at("combined");
  const double coefficient = (alpha - 0.5) / (alpha - 1.0);
  ck.require_close(cj.at("coefficient").get<double>(), coefficient,
                   "coefficient (alpha - 1/2)/(alpha - 1)");
  if (mixing_certified) {
    ck.require(cj.at("certified").get<bool>(), "combined bound must be certified");
    const double disc_value = dj.at("value").get<double>();
    const double fwd =
        coefficient * disc_value + mj.at("value_forward").get<double>();
    ck.require_close(cj.at("value_forward").get<double>(), fwd,
                     "combined forward = coef * disc + mixing");
    ck.require(fwd <= eps * (1.0 + 1e-12), "combined forward <= eps");
    if (mode == "bidirectional") {
      const double rev =
          coefficient * mj.at("value_reverse").get<double>() + disc_value;
      ck.require_close(cj.at("value_reverse").get<double>(), rev,
                       "combined reverse = coef * mixing + disc");
      ck.require(rev <= eps * (1.0 + 1e-12), "combined reverse <= eps");
    }
  } else {
    ck.require(!cj.at("certified").get<bool>(),
               "combined bound cannot be certified without a mixing bound");
  }

  for (const auto& pc : j.at("preconditions"))
    ck.require(pc.at("satisfied").get<bool>(),
               "recorded precondition failed: " + pc.at("name").get<std::string>());

  return {ck.failures.empty(), ck.failures};
}

}  // namespace ldp::planner
