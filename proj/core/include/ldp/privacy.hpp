#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldp/planner.hpp"
#include "ldp/potentials.hpp"

namespace ldp::privacy {

enum class Loss { SquaredDistance, Logistic };

// Gibbs posterior spec: f(theta) = beta sum_i loss(theta, z_i) + lambda |theta|^2 / 2.
// For squared loss m = lambda and L = lambda + beta n; for logistic loss
// m = lambda and L = lambda + beta n max|z|^2 / 4.
struct GibbsSpec {
  std::vector<Vector> records;
  Loss loss = Loss::SquaredDistance;
  double beta = 1.0;
  double lambda = 1.0;
  double norm_bound = 1.0;  // every record must satisfy |z| <= norm_bound
};

// Privacy of the exact posterior mechanism on adjacent datasets is an input
// certificate supplied by the caller, not re-derived here. Either supply
// (zeta, delta) directly or a Renyi-form bound (order, value), which converts
// at the mechanism's delta target.
struct ExactCertificate {
  double zeta = 0.0;
  double delta = 0.0;
  std::optional<double> renyi_alpha;
  std::optional<double> renyi_value;
};

// End-to-end accounting. Totals follow the approximate-sampling composition:
// exactly 3 max(zeta_exact, zeta_target) and 3 max(delta_exact, delta_target).
// Only bidirectional plans can produce a report; a one-sided divergence bound
// does not certify differential privacy.
struct PrivacyReport {
  double zeta_exact = 0.0;
  double delta_exact = 0.0;
  double zeta_target = 0.0;
  double delta_target = 0.0;
  double plan_alpha = 0.0;
  double plan_epsilon_per_direction = 0.0;  // certified, both directions
  double zeta_sampling_achieved = 0.0;      // from the certified bound at delta_target
  double zeta_total = 0.0;
  double delta_total = 0.0;
};

std::string report_to_json(const PrivacyReport& r);

Potential build_gibbs_potential(const GibbsSpec& spec);

// Exact conjugate posterior for the squared loss: isotropic Gaussian with
// precision (lambda + beta n) and mean beta sum(z) / (lambda + beta n).
struct ConjugatePosterior {
  Vector mean;
  double variance = 0.0;
};
ConjugatePosterior exact_conjugate_posterior(const GibbsSpec& spec);

struct PosteriorSample {
  Vector theta;
  PrivacyReport report;
  planner::SamplingPlan plan;
};

// Picks alpha = 1 + 2 ln(1/delta)/zeta and per-direction epsilon = zeta/2,
// plans bidirectionally on the canonicalized potential, runs the chain, and
// maps the sample back. The plan depends only on (n, dim, norm bound, beta,
// lambda), never on record values.
// Refuses any mode other than bidirectional: a one-sided divergence bound
// does not certify differential privacy.
PosteriorSample private_posterior_sample(const GibbsSpec& spec, double zeta, double delta,
                                         const ExactCertificate& cert, double c,
                                         std::uint64_t seed,
                                         planner::Mode mode = planner::Mode::Bidirectional);

// Squared-loss convenience wrapper; also exposes the exact posterior.
struct MeanEstimationResult {
  PosteriorSample sample;
  ConjugatePosterior posterior;
};
MeanEstimationResult mean_estimation_mechanism(const std::vector<Vector>& data, double beta,
                                               double lambda, double norm_bound, double zeta,
                                               double delta, const ExactCertificate& cert,
                                               double c, std::uint64_t seed);

}  // namespace ldp::privacy
