#include "ldp/privacy.hpp"

#include <cmath>

#include "json.hpp"
#include "ldp/dynamics.hpp"
#include "ldp/errors.hpp"
#include "ldp/renyi.hpp"

namespace ldp::privacy {

Potential build_gibbs_potential(const GibbsSpec& spec) {
  if (spec.beta <= 0.0 || spec.lambda <= 0.0)
    throw std::invalid_argument("build_gibbs_potential: beta, lambda must be positive");
  for (const auto& z : spec.records)
    if (z.norm() > spec.norm_bound * (1.0 + 1e-12))
      throw ConfigError("build_gibbs_potential: record exceeds the declared norm bound");
  if (spec.loss == Loss::SquaredDistance)
    return quadratic_mean_posterior(spec.records, spec.beta, spec.lambda);
  return logistic_posterior(spec.records, spec.lambda, spec.beta);
}

ConjugatePosterior exact_conjugate_posterior(const GibbsSpec& spec) {
  if (spec.loss != Loss::SquaredDistance)
    throw std::invalid_argument("exact_conjugate_posterior: squared loss only");
  const int dim = spec.records.empty() ? 1 : static_cast<int>(spec.records.front().size());
  Vector sum = Vector::Zero(dim);
  for (const auto& z : spec.records) sum += z;
  const double precision = spec.lambda + spec.beta * static_cast<double>(spec.records.size());
  ConjugatePosterior post;
  post.mean = (spec.beta / precision) * sum;
  post.variance = 1.0 / precision;
  return post;
}

std::string report_to_json(const PrivacyReport& r) {
  nlohmann::ordered_json j;
  j["exact_mechanism"] = {{"zeta", r.zeta_exact}, {"delta", r.delta_exact}};
  j["target"] = {{"zeta", r.zeta_target}, {"delta", r.delta_target}};
  j["sampling"] = {{"alpha", r.plan_alpha},
                   {"epsilon_per_direction", r.plan_epsilon_per_direction},
                   {"zeta_achieved", r.zeta_sampling_achieved}};
  j["total"] = {{"zeta", r.zeta_total}, {"delta", r.delta_total}};
  j["composition"] = "3 max(zeta_exact, zeta) and 3 max(delta_exact, delta)";
  return j.dump(2);
}

PosteriorSample private_posterior_sample(const GibbsSpec& spec, double zeta, double delta,
                                         const ExactCertificate& cert, double c,
                                         std::uint64_t seed, planner::Mode mode) {
  if (mode != planner::Mode::Bidirectional)
    throw InfeasibleError(
        "private_posterior_sample: a one-sided divergence bound does not certify "
        "differential privacy; only bidirectional plans are accepted");
  if (zeta <= 0.0 || delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("private_posterior_sample: need zeta > 0, delta in (0,1)");
  double zeta_exact = cert.zeta;
  double delta_exact = cert.delta;
  if (cert.renyi_alpha && cert.renyi_value) {
    zeta_exact = renyi::renyi_to_apxdp(
        {*cert.renyi_alpha, *cert.renyi_value, renyi::Direction::Both}, delta);
    delta_exact = delta;
  }
  if (zeta_exact < 0.0 || delta_exact < 0.0)
    throw ConfigError("private_posterior_sample: missing or invalid exact certificate");

  const Potential f = build_gibbs_potential(spec);
  const CanonicalPotential canonical = canonicalize(f);
  const double L = canonical.canonical.smoothness;
  const double d = canonical.canonical.dim;

  const double alpha = 1.0 + 2.0 * std::log(1.0 / delta) / zeta;
  const double eps = zeta / 2.0;

  PosteriorSample out;
  out.plan = planner::plan_sampling(alpha, eps, L, d, {}, planner::Process::OverdampedSC,
                                    planner::Mode::Bidirectional, c);

  RngStream rng(seed);
  DynamicsConfig cfg;
  cfg.process = ProcessKind::Overdamped;
  cfg.eta = out.plan.eta;
  cfg.steps = out.plan.T;
  cfg.seed = seed;
  const ChainState final_state = run_chain_final(
      canonical.canonical, cfg, InitialDistribution::standard_gaussian(), rng);
  out.theta = canonical.to_original(final_state.x);

  PrivacyReport& rep = out.report;
  rep.zeta_exact = zeta_exact;
  rep.delta_exact = delta_exact;
  rep.zeta_target = zeta;
  rep.delta_target = delta;
  rep.plan_alpha = out.plan.target_alpha;
  rep.plan_epsilon_per_direction =
      std::max(out.plan.combined.value_forward, out.plan.combined.value_reverse);
  rep.zeta_sampling_achieved = renyi::renyi_to_apxdp(
      {out.plan.target_alpha, rep.plan_epsilon_per_direction, renyi::Direction::Both}, delta);
  rep.zeta_total = 3.0 * std::max(zeta_exact, zeta);
  rep.delta_total = 3.0 * std::max(delta_exact, delta);
  return out;
}

MeanEstimationResult mean_estimation_mechanism(const std::vector<Vector>& data, double beta,
                                               double lambda, double norm_bound, double zeta,
                                               double delta, const ExactCertificate& cert,
                                               double c, std::uint64_t seed) {
  GibbsSpec spec;
  spec.records = data;
  spec.loss = Loss::SquaredDistance;
  spec.beta = beta;
  spec.lambda = lambda;
  spec.norm_bound = norm_bound;
  MeanEstimationResult out;
  out.sample = private_posterior_sample(spec, zeta, delta, cert, c, seed);
  out.posterior = exact_conjugate_posterior(spec);
  return out;
}

}  // namespace ldp::privacy
