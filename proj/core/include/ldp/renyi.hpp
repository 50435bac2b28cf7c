#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ldp::renyi {

// Direction of the bounded pair, written as (first || second). A `Both` bound
// holds for either ordering at the same order. Combinators refuse to mix
// directions silently.
enum class Direction { Forward, Reverse, Both };

std::string direction_name(Direction d);

// All divergences are carried in nats.
struct DivergenceBound {
  double alpha = 2.0;
  double value = 0.0;
  Direction direction = Direction::Forward;
};

// Ordered (alpha, value) knots, non-decreasing in alpha by monotonicity of
// Renyi divergences.
struct DivergenceCurve {
  std::vector<std::pair<double, double>> knots;
  Direction direction = Direction::Forward;
};

// D_alpha(N(0, s^2 I) || N(x, s^2 I)) <= alpha |x|^2 / (2 s^2), symmetric for
// isotropic equal-covariance Gaussians.
DivergenceBound gaussian_shift_divergence(double alpha, double shift_norm, double sigma2);

// Exact closed form between univariate Gaussians; infinite (and flagged so)
// when alpha var2 + (1 - alpha) var1 <= 0.
DivergenceBound gaussian1d_divergence(double alpha, double mean1, double var1,
                                      double mean2, double var2);

using Density = std::function<double(double)>;
using LogDensity = std::function<double(double)>;

struct GridDivergenceResult {
  DivergenceBound bound;
  double error_estimate = 0.0;  // from grid refinement
  double mass_p = 0.0;          // trapezoid mass of each density over the grid
  double mass_q = 0.0;
};

// Trapezoid estimate of (1/(alpha-1)) ln integral p^alpha q^(1-alpha) over a
// uniform grid of n points on [lo, hi], refined once to estimate the error.
// This is the designated independent oracle for the closed forms. Throws when
// the grid misses more than ~1e-9 of either mass or a density is negative.
GridDivergenceResult grid_divergence(double alpha, const Density& p, const Density& q,
                                     double lo, double hi, int n);

// Same oracle on log densities. The integrand p^alpha q^(1-alpha) often peaks
// where both densities underflow a double; this variant sums in shifted log
// space end to end and stays exact there.
GridDivergenceResult grid_divergence_log(double alpha, const LogDensity& log_p,
                                         const LogDensity& log_q, double lo, double hi,
                                         int n);

// Exact finite sum for discrete distributions on a common support.
double discrete_divergence(double alpha, std::span<const double> p,
                           std::span<const double> q);

// Adaptive composition: sum of per-step bounds at a fixed order and direction.
DivergenceBound compose(double alpha, Direction direction,
                        std::span<const DivergenceBound> bounds);

// Weak triangle inequality for the chain written P -> Q -> R:
//   D_alpha(P||R) <= ((alpha - 1/p)/(alpha - 1)) D_{p alpha}(P||Q)
//                    + D_{q (alpha - 1/p)}(Q||R),   1/p + 1/q = 1.
// Inputs must carry exactly the required orders and cover the chain
// orientation; monotone up-conversion of orders goes through curve_lookup.
DivergenceBound weak_triangle(double alpha, double p, const DivergenceBound& bound_pq,
                              const DivergenceBound& bound_qr);

// delta-approximate max divergence: value + ln(1/delta)/(alpha - 1).
double renyi_to_apxdp(const DivergenceBound& bound, double delta);

// Upper bound at order `alpha` from the knot with the smallest recorded order
// >= alpha. Errors when alpha exceeds every recorded order.
DivergenceBound curve_lookup(const DivergenceCurve& curve, double alpha);

// JSON array of {alpha, value, direction} objects.
std::string curve_to_json(const DivergenceCurve& curve);
DivergenceCurve curve_from_json(const std::string& text);

}  // namespace ldp::renyi
