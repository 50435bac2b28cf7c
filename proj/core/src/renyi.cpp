#include "ldp/renyi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace ldp::renyi {

std::string direction_name(Direction d) {
  switch (d) {
    case Direction::Forward: return "forward";
    case Direction::Reverse: return "reverse";
    case Direction::Both: return "both";
  }
  return "?";
}

namespace {

Direction direction_from_name(const std::string& s) {
  if (s == "forward") return Direction::Forward;
  if (s == "reverse") return Direction::Reverse;
  if (s == "both") return Direction::Both;
  throw std::invalid_argument("unknown direction '" + s + "'");
}

bool covers(Direction have, Direction need) {
  return have == Direction::Both || have == need;
}

void require_order(double have, double need, const char* what) {
  if (std::abs(have - need) > 1e-9 * std::max(1.0, std::abs(need)))
    throw std::invalid_argument(std::string(what) + ": order mismatch (have " +
                                std::to_string(have) + ", need " + std::to_string(need) +
                                "); up-convert explicitly via curve_lookup");
}

}  // namespace

DivergenceBound gaussian_shift_divergence(double alpha, double shift_norm, double sigma2) {
  if (alpha <= 1.0) throw std::invalid_argument("gaussian_shift_divergence: alpha must exceed 1");
  if (sigma2 <= 0.0) throw std::invalid_argument("gaussian_shift_divergence: sigma2 must be positive");
  return {alpha, alpha * shift_norm * shift_norm / (2.0 * sigma2), Direction::Both};
}

DivergenceBound gaussian1d_divergence(double alpha, double mean1, double var1,
                                      double mean2, double var2) {
  if (alpha <= 1.0) throw std::invalid_argument("gaussian1d_divergence: alpha must exceed 1");
  if (var1 <= 0.0 || var2 <= 0.0)
    throw std::invalid_argument("gaussian1d_divergence: variances must be positive");
  const double var_alpha = alpha * var2 + (1.0 - alpha) * var1;
  if (var_alpha <= 0.0)
    return {alpha, std::numeric_limits<double>::infinity(), Direction::Forward};
  const double dm = mean1 - mean2;
  const double mean_term = alpha * dm * dm / (2.0 * var_alpha);
  const double var_term =
      std::log(std::sqrt(var_alpha) /
               (std::pow(std::sqrt(var1), 1.0 - alpha) * std::pow(std::sqrt(var2), alpha))) /
      (1.0 - alpha);
  return {alpha, mean_term + var_term, Direction::Forward};
}

namespace {

// Trapezoid integrals of p, q, and p^alpha q^(1-alpha) over a uniform grid.
// The Renyi integrand spans hundreds of nats, so it is summed in shifted log
// space and reported as a log value.
struct TrapezoidPass {
  double mass_p = 0.0, mass_q = 0.0;
  double log_integral = -std::numeric_limits<double>::infinity();
};

TrapezoidPass trapezoid_pass(double alpha, const LogDensity& log_p, const LogDensity& log_q,
                             double lo, double hi, int n) {
  const double h = (hi - lo) / static_cast<double>(n - 1);
  std::vector<double> exponents(static_cast<size_t>(n),
                                -std::numeric_limits<double>::infinity());
  double max_exponent = -std::numeric_limits<double>::infinity();
  TrapezoidPass out;
  for (int i = 0; i < n; ++i) {
    const double x = lo + h * static_cast<double>(i);
    const double lp = log_p(x);
    const double lq = log_q(x);
    if (std::isnan(lp) || std::isnan(lq))
      throw std::invalid_argument("grid_divergence: log density is NaN");
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    out.mass_p += w * std::exp(lp);
    out.mass_q += w * std::exp(lq);
    if (lp > -std::numeric_limits<double>::infinity() &&
        lq > -std::numeric_limits<double>::infinity()) {
      exponents[static_cast<size_t>(i)] = alpha * lp + (1.0 - alpha) * lq + std::log(w);
      max_exponent = std::max(max_exponent, exponents[static_cast<size_t>(i)]);
    }
  }
  out.mass_p *= h;
  out.mass_q *= h;
  if (std::isfinite(max_exponent)) {
    double sum = 0.0;
    for (const double e : exponents)
      if (std::isfinite(e)) sum += std::exp(e - max_exponent);
    out.log_integral = max_exponent + std::log(sum) + std::log(h);
  }
  return out;
}

GridDivergenceResult grid_divergence_impl(double alpha, const LogDensity& log_p,
                                          const LogDensity& log_q, double lo, double hi,
                                          int n) {
  if (alpha <= 1.0) throw std::invalid_argument("grid_divergence: alpha must exceed 1");
  if (n < 9 || hi <= lo) throw std::invalid_argument("grid_divergence: bad grid");

  const TrapezoidPass coarse = trapezoid_pass(alpha, log_p, log_q, lo, hi, n);
  const TrapezoidPass fine = trapezoid_pass(alpha, log_p, log_q, lo, hi, 2 * n - 1);

  if (fine.mass_p < 1.0 - 1e-9 || fine.mass_q < 1.0 - 1e-9)
    throw std::invalid_argument("grid_divergence: grid does not cover enough mass");
  if (!std::isfinite(fine.log_integral))
    throw std::invalid_argument("grid_divergence: integrand vanished on the grid");

  const double value = fine.log_integral / (alpha - 1.0);
  const double coarse_value = std::isfinite(coarse.log_integral)
                                  ? coarse.log_integral / (alpha - 1.0)
                                  : std::numeric_limits<double>::infinity();
  GridDivergenceResult out;
  out.bound = {alpha, value, Direction::Forward};
  // Richardson-style estimate: the trapezoid error shrinks by >= 4x per halving.
  out.error_estimate = std::abs(value - coarse_value) / 3.0 + 1e-14;
  out.mass_p = fine.mass_p;
  out.mass_q = fine.mass_q;
  return out;
}

}  // namespace

GridDivergenceResult grid_divergence(double alpha, const Density& p, const Density& q,
                                     double lo, double hi, int n) {
  auto log_of = [](const Density& f) {
    return [&f](double x) {
      const double v = f(x);
      if (v < 0.0) throw std::invalid_argument("grid_divergence: negative density value");
      return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
    };
  };
  return grid_divergence_impl(alpha, log_of(p), log_of(q), lo, hi, n);
}

GridDivergenceResult grid_divergence_log(double alpha, const LogDensity& log_p,
                                         const LogDensity& log_q, double lo, double hi,
                                         int n) {
  return grid_divergence_impl(alpha, log_p, log_q, lo, hi, n);
}

double discrete_divergence(double alpha, std::span<const double> p,
                           std::span<const double> q) {
  if (alpha <= 1.0) throw std::invalid_argument("discrete_divergence: alpha must exceed 1");
  if (p.size() != q.size())
    throw std::invalid_argument("discrete_divergence: size mismatch");
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0)
      throw std::invalid_argument("discrete_divergence: negative mass");
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    sum += std::exp(alpha * std::log(p[i]) + (1.0 - alpha) * std::log(q[i]));
  }
  return std::log(sum) / (alpha - 1.0);
}

DivergenceBound compose(double alpha, Direction direction,
                        std::span<const DivergenceBound> bounds) {
  if (alpha <= 1.0) throw std::invalid_argument("compose: alpha must exceed 1");
  double total = 0.0;
  for (const auto& b : bounds) {
    require_order(b.alpha, alpha, "compose");
    if (!covers(b.direction, direction))
      throw std::invalid_argument("compose: direction mismatch");
    total += b.value;
  }
  return {alpha, total, direction};
}

DivergenceBound weak_triangle(double alpha, double p, const DivergenceBound& bound_pq,
                              const DivergenceBound& bound_qr) {
  if (alpha <= 1.0) throw std::invalid_argument("weak_triangle: alpha must exceed 1");
  if (p <= 1.0) throw std::invalid_argument("weak_triangle: p must exceed 1");
  const double q = p / (p - 1.0);
  require_order(bound_pq.alpha, p * alpha, "weak_triangle (P||Q input)");
  require_order(bound_qr.alpha, q * (alpha - 1.0 / p), "weak_triangle (Q||R input)");
  if (!covers(bound_pq.direction, Direction::Forward) ||
      !covers(bound_qr.direction, Direction::Forward))
    throw std::invalid_argument("weak_triangle: inputs must cover the chain orientation");
  const double coefficient = (alpha - 1.0 / p) / (alpha - 1.0);
  return {alpha, coefficient * bound_pq.value + bound_qr.value, Direction::Forward};
}

double renyi_to_apxdp(const DivergenceBound& bound, double delta) {
  if (bound.alpha <= 1.0) throw std::invalid_argument("renyi_to_apxdp: alpha must exceed 1");
  if (delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("renyi_to_apxdp: delta must lie in (0, 1)");
  return bound.value + std::log(1.0 / delta) / (bound.alpha - 1.0);
}

DivergenceBound curve_lookup(const DivergenceCurve& curve, double alpha) {
  if (curve.knots.empty()) throw std::invalid_argument("curve_lookup: empty curve");
  const double tol = 1e-9 * std::max(1.0, std::abs(alpha));
  double best_order = 0.0, best_value = 0.0;
  bool found = false;
  for (const auto& [order, value] : curve.knots) {
    if (order + tol >= alpha && (!found || order < best_order)) {
      best_order = order;
      best_value = value;
      found = true;
    }
  }
  if (!found)
    throw std::invalid_argument("curve_lookup: alpha exceeds every recorded order");
  return {alpha, best_value, curve.direction};
}

std::string curve_to_json(const DivergenceCurve& curve) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [alpha, value] : curve.knots)
    arr.push_back({{"alpha", alpha}, {"value", value}, {"direction", direction_name(curve.direction)}});
  return arr.dump();
}

DivergenceCurve curve_from_json(const std::string& text) {
  const auto arr = nlohmann::json::parse(text);
  DivergenceCurve curve;
  for (size_t i = 0; i < arr.size(); ++i) {
    curve.knots.emplace_back(arr[i].at("alpha").get<double>(), arr[i].at("value").get<double>());
    if (i == 0) curve.direction = direction_from_name(arr[i].at("direction").get<std::string>());
  }
  return curve;
}

}  // namespace ldp::renyi
