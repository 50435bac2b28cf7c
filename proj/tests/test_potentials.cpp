#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "ldp/potentials.hpp"
#include "ldp/rng.hpp"

using ldp::Matrix;
using ldp::Potential;
using ldp::Vector;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const double x : xs) v(i++) = x;
  return v;
}

// central-difference directional derivative, the oracle for every gradient
double fd_directional(const Potential& p, const Vector& x, const Vector& e, double h) {
  return (p.value(x + h * e) - p.value(x - h * e)) / (2.0 * h);
}

// finite-difference Rayleigh quotient of the Hessian at x in direction e
double fd_rayleigh(const Potential& p, const Vector& x, const Vector& e, double h) {
  const Vector ge = (p.gradient(x + h * e) - p.gradient(x - h * e)) / (2.0 * h);
  return ge.dot(e) / e.squaredNorm();
}

void check_gradients(const Potential& p, ldp::RngStream& rng, int probes = 40) {
  for (int i = 0; i < probes; ++i) {
    Vector x = 10.0 * rng.uniform() * rng.gaussian_vector(p.dim).normalized();
    Vector e = rng.gaussian_vector(p.dim).normalized();
    const double fd = fd_directional(p, x, e, 1e-5);
    CHECK(std::abs(fd - p.gradient(x).dot(e)) <= 1e-5);
  }
}

}  // namespace

TEST_CASE("finite-difference gradient check on every builtin") {
  ldp::RngStream rng(11);
  check_gradients(ldp::gaussian_potential(Matrix::Identity(3, 3)), rng);

  Matrix aniso(2, 2);
  aniso << 1.0, 0.0, 0.0, 4.0;
  check_gradients(ldp::gaussian_potential(aniso), rng);

  std::vector<Vector> data;
  ldp::RngStream drng(5);
  for (int i = 0; i < 10; ++i) data.push_back(drng.gaussian_vector(2).normalized() * drng.uniform());
  check_gradients(ldp::quadratic_mean_posterior(data, 1.0, 1.0), rng);
  check_gradients(ldp::logistic_posterior(data, 1.0), rng);
  check_gradients(ldp::huber_potential(2.0, 1.0, 2), rng);
}

TEST_CASE("declared m and L bracket finite-difference Rayleigh quotients") {
  ldp::RngStream rng(23);
  std::vector<Vector> data;
  for (int i = 0; i < 10; ++i) data.push_back(rng.gaussian_vector(2).normalized() * rng.uniform());
  const std::vector<Potential> builtins = {
      ldp::gaussian_potential(Matrix::Identity(2, 2)),
      ldp::quadratic_mean_posterior(data, 1.0, 1.0),
      ldp::logistic_posterior(data, 1.0),
      ldp::huber_potential(2.0, 1.0, 2),
  };
  for (const auto& p : builtins) {
    for (int i = 0; i < 100; ++i) {
      Vector x = rng.gaussian_vector(p.dim);
      Vector e = rng.gaussian_vector(p.dim).normalized();
      const double q = fd_rayleigh(p, x, e, 1e-5);
      CHECK(q >= p.strong_convexity - 1e-3);
      CHECK(q <= p.smoothness + 1e-3);
    }
  }
}

TEST_CASE("find_minimizer on quadratics") {
  // f(x) = |x - (1,2)|^2 / 2 has its minimum at (1,2)
  std::vector<Vector> data = {vec({1.0, 2.0})};
  Potential p = ldp::quadratic_mean_posterior(data, 1.0, 1e-12);
  p.minimizer.reset();
  p.strong_convexity = 1.0;  // exact curvature of the squared loss
  const Vector m = ldp::find_minimizer(p, 1e-8);
  CHECK((m - vec({1.0, 2.0})).norm() <= 1e-6);

  Potential q = ldp::gaussian_potential(Matrix::Identity(1, 1));
  q.minimizer.reset();
  CHECK(std::abs(ldp::find_minimizer(q, 1e-8)(0)) <= 1e-8);
}

TEST_CASE("find_minimizer matches a long-run high-precision descent on a logistic posterior") {
  const std::vector<Vector> data = {vec({0.8, 0.1}), vec({-0.3, 0.6}), vec({0.2, -0.9})};
  Potential p = ldp::logistic_posterior(data, 1.0);
  const Vector coarse = ldp::find_minimizer(p, 1e-6);
  const Vector oracle = ldp::find_minimizer(p, 1e-12, 2000000);
  CHECK((coarse - oracle).norm() <= 1e-5);
  CHECK(p.gradient(coarse).norm() <= 1e-6);
}

TEST_CASE("find_minimizer signals inconsistent metadata") {
  Potential p = ldp::gaussian_potential(Matrix::Identity(1, 1));
  p.minimizer.reset();
  p.strong_convexity = 0.0;
  CHECK_THROWS_AS(ldp::find_minimizer(p, 1e-8), std::invalid_argument);
}

TEST_CASE("canonicalize: isotropic quadratic with m = L = 4 maps to the standard quadratic") {
  // f(x) = 2 x^2, precision 4
  Potential p = ldp::gaussian_potential(4.0 * Matrix::Identity(1, 1));
  const auto canon = ldp::canonicalize(p);
  CHECK(canon.canonical.strong_convexity == doctest::Approx(1.0));
  CHECK(canon.canonical.smoothness == doctest::Approx(1.0));
  CHECK(canon.scale == doctest::Approx(2.0));
  // g(x) = f(x/2) = x^2/2
  CHECK(canon.canonical.value(vec({1.5})) == doctest::Approx(0.5 * 1.5 * 1.5));
}

TEST_CASE("canonicalize: pure translation") {
  // f(x) = (x - 3)^2 / 2 via a single-record posterior with negligible prior
  std::vector<Vector> data = {vec({3.0})};
  Potential p = ldp::quadratic_mean_posterior(data, 1.0, 1e-14);
  p.strong_convexity = 1.0;  // exact curvature of the squared loss
  const auto canon = ldp::canonicalize(p);
  CHECK(canon.shift(0) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(canon.scale == doctest::Approx(1.0));
  CHECK(canon.canonical.value(vec({0.7})) == doctest::Approx(0.5 * 0.7 * 0.7).epsilon(1e-9));
}

TEST_CASE("canonicalize: diag(1,4) keeps m=1, L=4; Hessian eigenvalues confirm") {
  Matrix P(2, 2);
  P << 1.0, 0.0, 0.0, 4.0;
  Potential p = ldp::gaussian_potential(P);
  const auto canon = ldp::canonicalize(p);
  CHECK(canon.canonical.smoothness == doctest::Approx(4.0));
  const double h = 1e-5;
  const double q1 = fd_rayleigh(canon.canonical, vec({0.3, -0.2}), vec({1.0, 0.0}), h);
  const double q2 = fd_rayleigh(canon.canonical, vec({0.3, -0.2}), vec({0.0, 1.0}), h);
  CHECK(q1 == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(q2 == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("canonicalize round trip and density-ratio preservation") {
  ldp::RngStream rng(7);
  std::vector<Vector> data;
  for (int i = 0; i < 6; ++i) data.push_back(rng.gaussian_vector(2).normalized() * rng.uniform());
  const Potential p = ldp::quadratic_mean_posterior(data, 2.0, 0.5);
  const auto canon = ldp::canonicalize(p);
  for (int i = 0; i < 50; ++i) {
    const Vector x = rng.gaussian_vector(2);
    CHECK((canon.to_original(canon.to_canonical(x)) - x).norm() <= 1e-10 * (1.0 + x.norm()));
    const Vector y = rng.gaussian_vector(2);
    // g(x) - g(y) = f(T(x)) - f(T(y)) for the affine map T
    const double lhs = canon.canonical.value(x) - canon.canonical.value(y);
    const double rhs = p.value(canon.to_original(x)) - p.value(canon.to_original(y));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
  }
  // canonical value vanishes at the canonical minimizer
  CHECK(canon.canonical.value(Vector::Zero(2)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(canon.canonical.gradient(Vector::Zero(2)).norm() <= 1e-8);
}

TEST_CASE("canonicalize refuses m = 0") {
  CHECK_THROWS_AS(ldp::canonicalize(ldp::huber_potential(2.0, 1.0, 1)),
                  std::invalid_argument);
}

TEST_CASE("builtin constants") {
  SUBCASE("standard gaussian d=3") {
    const Potential p = ldp::gaussian_potential(Matrix::Identity(3, 3));
    CHECK(p.strong_convexity == doctest::Approx(1.0));
    CHECK(p.smoothness == doctest::Approx(1.0));
    CHECK(p.minimizer->norm() == doctest::Approx(0.0));
  }
  SUBCASE("quadratic mean posterior n=10, beta=1, lambda=1: m=1, L=11") {
    ldp::RngStream rng(3);
    std::vector<Vector> data;
    for (int i = 0; i < 10; ++i) data.push_back(rng.gaussian_vector(2).normalized() * rng.uniform());
    const Potential p = ldp::quadratic_mean_posterior(data, 1.0, 1.0);
    CHECK(p.strong_convexity == doctest::Approx(1.0));
    CHECK(p.smoothness == doctest::Approx(11.0));
    // minimizer = sum(z) / 11
    Vector sum = Vector::Zero(2);
    for (const auto& z : data) sum += z;
    CHECK((*p.minimizer - sum / 11.0).norm() <= 1e-12);
  }
  SUBCASE("huber B=2 L=1: gradient norm bounded by 2 on a grid") {
    const Potential p = ldp::huber_potential(2.0, 1.0, 2);
    CHECK(*p.lipschitz == doctest::Approx(2.0));
    for (double x = -6.0; x <= 6.0; x += 0.37)
      for (double y = -6.0; y <= 6.0; y += 0.41)
        CHECK(p.gradient(vec({x, y})).norm() <= 2.0 + 1e-12);
  }
}

TEST_CASE("non positive definite precision is rejected") {
  Matrix bad(2, 2);
  bad << 1.0, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(ldp::gaussian_potential(bad), std::invalid_argument);
}

TEST_CASE("CSV records load and reject ragged rows") {
  namespace fs = std::filesystem;
  const auto path = (fs::temp_directory_path() / "ldp_records.csv").string();
  {
    std::ofstream out(path);
    out << "0.1,0.2\n0.3,-0.4\n";
  }
  const auto rows = ldp::load_csv_records(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1](1) == doctest::Approx(-0.4));
  {
    std::ofstream out(path);
    out << "0.1,0.2\n0.3\n";
  }
  CHECK_THROWS(ldp::load_csv_records(path));
  fs::remove(path);
}

TEST_CASE("potential_from_config builds each kind") {
  const Potential g = ldp::potential_from_config(
      R"({"kind":"gaussian","precision":[[2.0,0.0],[0.0,2.0]]})");
  CHECK(g.smoothness == doctest::Approx(2.0));

  const Potential q = ldp::potential_from_config(
      R"({"kind":"quadratic_mean_posterior","beta":1.0,"lambda":1.0,
          "data":[[0.1,0.2],[0.3,-0.1]]})");
  CHECK(q.smoothness == doctest::Approx(3.0));

  const Potential h = ldp::potential_from_config(
      R"({"kind":"huber_lipschitz","B":2.0,"L":1.0,"dim":1})");
  CHECK(*h.lipschitz == doctest::Approx(2.0));

  CHECK_THROWS(ldp::potential_from_config(R"({"kind":"mystery"})"));
}
