#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ldp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A smooth scalar potential f on R^d with gradient access. Values are
// negative log densities up to an additive constant; normalizers are never
// computed because the samplers never need them.
//
// Declared curvature metadata must bracket the true curvature:
//   strong_convexity <= v' H(x) v / |v|^2 <= smoothness   for all x, v.
// `lipschitz` is set iff |grad f| is bounded everywhere by that value.
// Evaluation is pure and reentrant; one value may be shared by concurrent
// chains without synchronization.
struct Potential {
  int dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  double strong_convexity = 0.0;  // m; 0 when merely convex
  double smoothness = 0.0;        // L
  std::optional<double> lipschitz;
  std::optional<Vector> minimizer;
};

// Potential rescaled to strong convexity 1 with its minimizer moved to the
// origin and value 0 there:  g(x) = f(x / sqrt(m) + x*) - f(x*).
struct CanonicalPotential {
  Potential canonical;
  Vector shift;        // minimizer of the original potential
  double scale = 1.0;  // sqrt(m) of the original potential

  Vector to_original(const Vector& x) const { return x / scale + shift; }
  Vector to_canonical(const Vector& x) const { return scale * (x - shift); }
};

// Gradient descent with step 2/(m+L). Throws if the gradient norm does not
// reach `tol` within the iteration budget (inconsistent m/L metadata).
Vector find_minimizer(const Potential& p, double tol, int max_iterations = 200000);

// Requires p.strong_convexity > 0; computes the minimizer if not declared.
CanonicalPotential canonicalize(const Potential& p, double minimizer_tol = 1e-8);

// Builtins with exact constants.
//
// gaussian_potential: f(x) = x' P x / 2 for positive definite P; m and L are
// the extreme eigenvalues of P. `declared_m` may lower the declared strong
// convexity (it must stay in (0, lambda_min]).
Potential gaussian_potential(const Matrix& precision,
                             std::optional<double> declared_m = {});

// f(theta) = beta * sum_i |theta - z_i|^2 / 2 + lambda |theta|^2 / 2.
// Declared m = lambda, L = lambda + beta n.
Potential quadratic_mean_posterior(const std::vector<Vector>& data, double beta,
                                   double lambda);

// f(theta) = beta * sum_i log(1 + exp(-z_i' theta)) + lambda |theta|^2 / 2,
// labels folded into the records. Declared m = lambda,
// L = lambda + beta n max|z|^2 / 4.
Potential logistic_posterior(const std::vector<Vector>& data, double lambda,
                             double beta = 1.0);

// Radial Huber potential: quadratic of curvature L inside radius B/L, linear
// with slope B outside. B-Lipschitz, L-smooth, convex (m = 0), minimum at 0.
Potential huber_potential(double B, double L, int dim);

// Structured text configuration block: JSON object with a "kind" field in
// {gaussian, quadratic_mean_posterior, logistic_posterior, huber_lipschitz}
// plus numeric params; posterior kinds take inline "data" rows or "data_csv".
Potential potential_from_config(const std::string& json_text);

// CSV dataset: one record per row, numeric columns.
std::vector<Vector> load_csv_records(const std::string& path);

}  // namespace ldp
