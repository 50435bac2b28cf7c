#include "ldp/potentials.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ldp {

Vector find_minimizer(const Potential& p, double tol, int max_iterations) {
  if (p.strong_convexity <= 0.0)
    throw std::invalid_argument("find_minimizer: potential must be strongly convex");
  if (tol <= 0.0) throw std::invalid_argument("find_minimizer: tol must be positive");

  const double step = 2.0 / (p.strong_convexity + p.smoothness);
  Vector x = p.minimizer ? *p.minimizer : Vector::Zero(p.dim);
  for (int i = 0; i < max_iterations; ++i) {
    const Vector g = p.gradient(x);
    if (!g.allFinite())
      throw std::runtime_error("find_minimizer: non-finite gradient");
    if (g.norm() <= tol) return x;
    x -= step * g;
  }
  throw std::runtime_error(
      "find_minimizer: no convergence within the iteration budget; "
      "declared m/L metadata is likely inconsistent");
}

CanonicalPotential canonicalize(const Potential& p, double minimizer_tol) {
  if (p.strong_convexity <= 0.0)
    throw std::invalid_argument(
        "canonicalize: m = 0 has no canonical form; use the Lipschitz path");

  Vector xstar = p.minimizer ? *p.minimizer : find_minimizer(p, minimizer_tol);
  const double scale = std::sqrt(p.strong_convexity);
  const double fmin = p.value(xstar);

  auto inner = std::make_shared<Potential>(p);
  CanonicalPotential out;
  out.shift = xstar;
  out.scale = scale;
  out.canonical.dim = p.dim;
  out.canonical.strong_convexity = 1.0;
  out.canonical.smoothness = p.smoothness / p.strong_convexity;
  out.canonical.minimizer = Vector::Zero(p.dim);
  out.canonical.value = [inner, xstar, scale, fmin](const Vector& x) {
    return inner->value(x / scale + xstar) - fmin;
  };
  out.canonical.gradient = [inner, xstar, scale](const Vector& x) {
    return Vector(inner->gradient(x / scale + xstar) / scale);
  };
  return out;
}

Potential gaussian_potential(const Matrix& precision, std::optional<double> declared_m) {
  if (precision.rows() != precision.cols())
    throw std::invalid_argument("gaussian_potential: precision must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(precision);
  const double lambda_min = es.eigenvalues().minCoeff();
  const double lambda_max = es.eigenvalues().maxCoeff();
  if (lambda_min <= 0.0)
    throw std::invalid_argument("gaussian_potential: precision must be positive definite");

  double m = lambda_min;
  if (declared_m) {
    if (*declared_m <= 0.0 || *declared_m > lambda_min)
      throw std::invalid_argument("gaussian_potential: declared_m must lie in (0, lambda_min]");
    m = *declared_m;
  }

  auto P = std::make_shared<Matrix>(precision);
  Potential p;
  p.dim = static_cast<int>(precision.rows());
  p.strong_convexity = m;
  p.smoothness = lambda_max;
  p.minimizer = Vector::Zero(p.dim);
  p.value = [P](const Vector& x) { return 0.5 * x.dot(*P * x); };
  p.gradient = [P](const Vector& x) { return Vector(*P * x); };
  return p;
}

Potential quadratic_mean_posterior(const std::vector<Vector>& data, double beta,
                                   double lambda) {
  if (data.empty() && lambda <= 0.0)
    throw std::invalid_argument("quadratic_mean_posterior: empty dataset needs lambda > 0");
  if (beta <= 0.0 || lambda <= 0.0)
    throw std::invalid_argument("quadratic_mean_posterior: beta, lambda must be positive");

  const int dim = data.empty() ? 1 : static_cast<int>(data.front().size());
  for (const auto& z : data)
    if (z.size() != dim)
      throw std::invalid_argument("quadratic_mean_posterior: inconsistent record dimension");

  const double n = static_cast<double>(data.size());
  Vector sum = Vector::Zero(dim);
  double sum_sq = 0.0;
  for (const auto& z : data) {
    sum += z;
    sum_sq += z.squaredNorm();
  }

  const double curvature = lambda + beta * n;
  Potential p;
  p.dim = dim;
  p.strong_convexity = lambda;
  p.smoothness = curvature;
  p.minimizer = Vector((beta / curvature) * sum);
  p.value = [=](const Vector& th) {
    return beta * (0.5 * sum_sq - th.dot(sum) + 0.5 * n * th.squaredNorm())
           + 0.5 * lambda * th.squaredNorm();
  };
  p.gradient = [=](const Vector& th) {
    return Vector(curvature * th - beta * sum);
  };
  return p;
}

namespace {
// log(1 + exp(u)) without overflow
double log1pexp(double u) {
  if (u > 0.0) return u + std::log1p(std::exp(-u));
  return std::log1p(std::exp(u));
}
}  // namespace

Potential logistic_posterior(const std::vector<Vector>& data, double lambda,
                             double beta) {
  if (lambda <= 0.0 || beta <= 0.0)
    throw std::invalid_argument("logistic_posterior: beta, lambda must be positive");
  const int dim = data.empty() ? 1 : static_cast<int>(data.front().size());
  double max_sq = 0.0;
  for (const auto& z : data) {
    if (z.size() != dim)
      throw std::invalid_argument("logistic_posterior: inconsistent record dimension");
    max_sq = std::max(max_sq, z.squaredNorm());
  }

  auto records = std::make_shared<std::vector<Vector>>(data);
  const double n = static_cast<double>(data.size());
  Potential p;
  p.dim = dim;
  p.strong_convexity = lambda;
  p.smoothness = lambda + beta * n * max_sq / 4.0;
  p.value = [records, lambda, beta](const Vector& th) {
    double s = 0.0;
    for (const auto& z : *records) s += log1pexp(-z.dot(th));
    return beta * s + 0.5 * lambda * th.squaredNorm();
  };
  p.gradient = [records, lambda, beta](const Vector& th) {
    Vector g = lambda * th;
    for (const auto& z : *records) {
      const double u = -z.dot(th);
      const double sigma = 1.0 / (1.0 + std::exp(-u));  // d/du log(1+e^u)
      g -= beta * sigma * z;
    }
    return g;
  };
  return p;
}

Potential huber_potential(double B, double L, int dim) {
  if (B <= 0.0 || L <= 0.0 || dim <= 0)
    throw std::invalid_argument("huber_potential: B, L, dim must be positive");
  const double pivot = B / L;
  Potential p;
  p.dim = dim;
  p.strong_convexity = 0.0;
  p.smoothness = L;
  p.lipschitz = B;
  p.minimizer = Vector::Zero(dim);
  p.value = [=](const Vector& x) {
    const double r = x.norm();
    if (r <= pivot) return 0.5 * L * r * r;
    return B * r - 0.5 * B * B / L;
  };
  p.gradient = [=](const Vector& x) {
    const double r = x.norm();
    if (r <= pivot) return Vector(L * x);
    return Vector((B / r) * x);
  };
  return p;
}

std::vector<Vector> load_csv_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv_records: cannot open " + path);
  std::vector<Vector> out;
  std::string line;
  Eigen::Index expected = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    Vector v(row.size());
    for (size_t i = 0; i < row.size(); ++i) v(static_cast<Eigen::Index>(i)) = row[i];
    if (expected < 0) expected = v.size();
    if (v.size() != expected)
      throw std::runtime_error("load_csv_records: ragged rows in " + path);
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

std::vector<Vector> records_from_json(const nlohmann::json& cfg) {
  if (cfg.contains("data_csv")) return load_csv_records(cfg.at("data_csv").get<std::string>());
  std::vector<Vector> out;
  for (const auto& row : cfg.at("data")) {
    Vector v(row.size());
    for (size_t i = 0; i < row.size(); ++i) v(static_cast<Eigen::Index>(i)) = row[i].get<double>();
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

Potential potential_from_config(const std::string& json_text) {
  const auto cfg = nlohmann::json::parse(json_text);
  const std::string kind = cfg.at("kind").get<std::string>();
  if (kind == "gaussian") {
    const auto& rows = cfg.at("precision");
    const auto n = rows.size();
    Matrix P(n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) P(i, j) = rows[i][j].get<double>();
    std::optional<double> declared_m;
    if (cfg.contains("declared_m")) declared_m = cfg.at("declared_m").get<double>();
    return gaussian_potential(P, declared_m);
  }
  if (kind == "quadratic_mean_posterior") {
    return quadratic_mean_posterior(records_from_json(cfg), cfg.at("beta").get<double>(),
                                    cfg.at("lambda").get<double>());
  }
  if (kind == "logistic_posterior") {
    const double beta = cfg.contains("beta") ? cfg.at("beta").get<double>() : 1.0;
    return logistic_posterior(records_from_json(cfg), cfg.at("lambda").get<double>(), beta);
  }
  if (kind == "huber_lipschitz") {
    return huber_potential(cfg.at("B").get<double>(), cfg.at("L").get<double>(),
                           cfg.at("dim").get<int>());
  }
  throw std::invalid_argument("potential_from_config: unknown kind '" + kind + "'");
}

}  // namespace ldp
