#include <cmath>
#include <vector>

#include "doctest.h"
#include "ldp/renyi.hpp"
#include "ldp/rng.hpp"

using namespace ldp::renyi;

namespace {

Density gaussian_density(double mean, double var) {
  return [mean, var](double x) {
    return std::exp(-(x - mean) * (x - mean) / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
  };
}

// wide-grid quadrature of the Renyi integral, used as the oracle throughout.
// The integrand p^a q^(1-a) is a Gaussian with variance v1 v2 / va where
// va = a v2 + (1-a) v1, which can far exceed v1 and v2; the grid has to
// cover that width.
LogDensity gaussian_log_density(double mean, double var) {
  return [mean, var](double x) {
    return -(x - mean) * (x - mean) / (2.0 * var) - 0.5 * std::log(2.0 * M_PI * var);
  };
}

double quadrature_oracle(double alpha, double m1, double v1, double m2, double v2) {
  const double va = alpha * v2 + (1.0 - alpha) * v1;
  const double width = std::sqrt(std::max({v1, v2, v1 * v2 / va}));
  const double peak = (alpha * m1 * v2 + (1.0 - alpha) * m2 * v1) / va;
  const double lo = std::min({m1, m2, peak}) - 45.0 * width;
  const double hi = std::max({m1, m2, peak}) + 45.0 * width;
  return grid_divergence_log(alpha, gaussian_log_density(m1, v1), gaussian_log_density(m2, v2),
                             lo, hi, 40001)
      .bound.value;
}

}  // namespace

TEST_CASE("gaussian shift divergence") {
  CHECK(gaussian_shift_divergence(2.0, 1.0, 1.0).value == doctest::Approx(1.0));
  for (const double alpha : {1.5, 2.0, 8.0})
    CHECK(gaussian_shift_divergence(alpha, 0.0, 3.0).value == doctest::Approx(0.0));
  // quadrature agreement for the equal-variance case
  CHECK(std::abs(quadrature_oracle(2.0, 0.0, 1.0, 1.0, 1.0) - 1.0) <= 1e-6);
  // exact scaling identities
  const double base = gaussian_shift_divergence(2.0, 1.3, 0.7).value;
  CHECK(gaussian_shift_divergence(4.0, 1.3, 0.7).value == doctest::Approx(2.0 * base));
  CHECK(gaussian_shift_divergence(2.0, 2.6, 0.7).value == doctest::Approx(4.0 * base));
  CHECK(gaussian_shift_divergence(2.0, 1.3, 1.4).value == doctest::Approx(base / 2.0));
}

TEST_CASE("gaussian1d closed form") {
  SUBCASE("identical parameters give zero") {
    CHECK(gaussian1d_divergence(2.0, 0.3, 1.7, 0.3, 1.7).value == doctest::Approx(0.0));
  }
  SUBCASE("equal variances reduce to the shift formula") {
    for (const double alpha : {1.5, 2.0, 5.0}) {
      const double got = gaussian1d_divergence(alpha, 1.0, 0.8, 0.0, 0.8).value;
      CHECK(got == doctest::Approx(alpha * 1.0 / (2.0 * 0.8)));
    }
  }
  SUBCASE("stationary-variance pair matches quadrature to 1e-8") {
    const double v2 = 2.0 / (2.0 - 0.1);
    const double got = gaussian1d_divergence(2.0, 0.0, 1.0, 0.0, v2).value;
    CHECK(std::abs(got - quadrature_oracle(2.0, 0.0, 1.0, 0.0, v2)) <= 1e-8);
  }
  SUBCASE("infinite when alpha var2 + (1-alpha) var1 <= 0") {
    const double v = gaussian1d_divergence(3.0, 0.0, 2.0, 0.0, 0.5).value;
    CHECK(std::isinf(v));
  }
  SUBCASE("100 random parameter sets agree with quadrature to 1e-6") {
    ldp::RngStream rng(41);
    int done = 0;
    while (done < 100) {
      const double alpha = 1.1 + 5.0 * rng.uniform();
      const double m1 = 2.0 * rng.gaussian() * 0.5;
      const double m2 = 2.0 * rng.gaussian() * 0.5;
      const double v1 = 0.4 + 2.0 * rng.uniform();
      const double v2 = 0.4 + 2.0 * rng.uniform();
      if (alpha * v2 + (1.0 - alpha) * v1 <= 0.05) continue;
      const double closed = gaussian1d_divergence(alpha, m1, v1, m2, v2).value;
      const double grid = quadrature_oracle(alpha, m1, v1, m2, v2);
      CHECK(std::abs(closed - grid) <= 1e-6 * std::max(1.0, std::abs(closed)));
      ++done;
    }
  }
}

TEST_CASE("grid divergence basics") {
  const auto same = grid_divergence(2.0, gaussian_density(0, 1), gaussian_density(0, 1),
                                    -12.0, 12.0, 4001);
  CHECK(std::abs(same.bound.value) <= 1e-10);

  // refinement halving the step changes the estimate by less than the
  // reported error bound
  const auto coarse = grid_divergence(2.0, gaussian_density(0, 1), gaussian_density(0.7, 1.3),
                                      -14.0, 14.0, 501);
  const auto fine = grid_divergence(2.0, gaussian_density(0, 1), gaussian_density(0.7, 1.3),
                                    -14.0, 14.0, 1001);
  CHECK(std::abs(coarse.bound.value - fine.bound.value) <=
        coarse.error_estimate + fine.error_estimate);

  CHECK_THROWS(grid_divergence(2.0, gaussian_density(0, 1), gaussian_density(0, 1),
                               -0.5, 0.5, 101));  // insufficient coverage
}

TEST_CASE("discrete divergence equals the exact finite sum") {
  ldp::RngStream rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform() * 8);
    std::vector<double> p(n), q(n);
    double sp = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
      p[i] = rng.uniform() + 1e-3;
      q[i] = rng.uniform() + 1e-3;
      sp += p[i];
      sq += q[i];
    }
    for (int i = 0; i < n; ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    const double alpha = 1.2 + 4.0 * rng.uniform();
    double direct = 0.0;
    for (int i = 0; i < n; ++i) direct += std::pow(p[i], alpha) * std::pow(q[i], 1.0 - alpha);
    direct = std::log(direct) / (alpha - 1.0);
    CHECK(std::abs(discrete_divergence(alpha, p, q) - direct) <= 1e-12);
  }
}

TEST_CASE("compose") {
  const std::vector<DivergenceBound> bounds = {{2.0, 0.1, Direction::Forward},
                                               {2.0, 0.2, Direction::Forward},
                                               {2.0, 0.3, Direction::Forward}};
  CHECK(compose(2.0, Direction::Forward, bounds).value == doctest::Approx(0.6));

  const std::vector<DivergenceBound> single = {{2.0, 0.15, Direction::Both}};
  CHECK(compose(2.0, Direction::Forward, single).value == doctest::Approx(0.15));

  CHECK(compose(2.0, Direction::Forward, std::span<const DivergenceBound>{}).value ==
        doctest::Approx(0.0));

  const std::vector<DivergenceBound> mixed_alpha = {{2.0, 0.1, Direction::Forward},
                                                    {3.0, 0.1, Direction::Forward}};
  CHECK_THROWS(compose(2.0, Direction::Forward, mixed_alpha));
  const std::vector<DivergenceBound> wrong_dir = {{2.0, 0.1, Direction::Reverse}};
  CHECK_THROWS(compose(2.0, Direction::Forward, wrong_dir));
}

TEST_CASE("compose is associative and commutative") {
  ldp::RngStream rng(3);
  for (int t = 0; t < 20; ++t) {
    std::vector<DivergenceBound> xs;
    for (int i = 0; i < 5; ++i) xs.push_back({2.0, rng.uniform(), Direction::Forward});
    const double all = compose(2.0, Direction::Forward, xs).value;
    std::vector<DivergenceBound> head(xs.begin(), xs.begin() + 2);
    std::vector<DivergenceBound> tail(xs.begin() + 2, xs.end());
    const std::vector<DivergenceBound> split = {
        {2.0, compose(2.0, Direction::Forward, head).value, Direction::Forward},
        {2.0, compose(2.0, Direction::Forward, tail).value, Direction::Forward}};
    CHECK(compose(2.0, Direction::Forward, split).value == doctest::Approx(all));
    std::reverse(xs.begin(), xs.end());
    CHECK(compose(2.0, Direction::Forward, xs).value == doctest::Approx(all));
  }
}

TEST_CASE("weak triangle worked substitutions") {
  const double eps = 0.9;
  SUBCASE("alpha=2, p=q=2") {
    const DivergenceBound pq{4.0, eps / 3.0, Direction::Forward};
    const DivergenceBound qr{3.0, eps / 3.0, Direction::Forward};
    const auto out = weak_triangle(2.0, 2.0, pq, qr);
    CHECK(out.value == doctest::Approx(1.5 * eps / 3.0 + eps / 3.0));
    CHECK(out.value == doctest::Approx(5.0 * eps / 6.0));
  }
  SUBCASE("P = Q collapses the chain") {
    const DivergenceBound pq{4.0, 0.0, Direction::Both};
    const DivergenceBound qr{3.0, 0.42, Direction::Forward};
    CHECK(weak_triangle(2.0, 2.0, pq, qr).value == doctest::Approx(0.42));
  }
  SUBCASE("alpha=3/2 gives coefficient 2 and total eps from eps/3 legs") {
    const DivergenceBound pq{3.0, eps / 3.0, Direction::Forward};
    const DivergenceBound qr{2.0, eps / 3.0, Direction::Forward};
    const auto out = weak_triangle(1.5, 2.0, pq, qr);
    CHECK(out.value == doctest::Approx(eps));
  }
  SUBCASE("order mismatch is refused") {
    const DivergenceBound pq{4.5, 0.1, Direction::Forward};
    const DivergenceBound qr{3.0, 0.1, Direction::Forward};
    CHECK_THROWS(weak_triangle(2.0, 2.0, pq, qr));
  }
}

TEST_CASE("renyi to approximate DP") {
  CHECK(renyi_to_apxdp({11.0, 0.5, Direction::Both}, std::exp(-10.0)) == doctest::Approx(1.5));
  // delta -> 1 collapses the additive term
  CHECK(renyi_to_apxdp({11.0, 0.5, Direction::Both}, 1.0 - 1e-12) ==
        doctest::Approx(0.5).epsilon(1e-9));
  // target recipe: alpha = 1 + 2 ln(1/delta)/zeta with bound zeta/2 lands on zeta
  const double zeta = 3.0, delta = 1e-6;
  const double alpha = 1.0 + 2.0 * std::log(1.0 / delta) / zeta;
  CHECK(renyi_to_apxdp({alpha, zeta / 2.0, Direction::Both}, delta) == doctest::Approx(zeta));
}

TEST_CASE("curve lookup") {
  const DivergenceCurve curve{{{2.0, 0.1}, {4.0, 0.3}}, Direction::Forward};
  CHECK(curve_lookup(curve, 3.0).value == doctest::Approx(0.3));
  CHECK(curve_lookup(curve, 4.0).value == doctest::Approx(0.3));
  CHECK(curve_lookup(curve, 2.0).value == doctest::Approx(0.1));
  CHECK(curve_lookup(curve, 1.5).value == doctest::Approx(0.1));  // monotone upper bound
  CHECK_THROWS(curve_lookup(curve, 5.0));
}

TEST_CASE("monotonicity of the divergence in alpha on random discrete pairs") {
  ldp::RngStream rng(29);
  for (int t = 0; t < 1000; ++t) {
    const int n = 4;
    std::vector<double> p(n), q(n);
    double sp = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
      p[i] = rng.uniform() + 0.05;
      q[i] = rng.uniform() + 0.05;
      sp += p[i];
      sq += q[i];
    }
    for (int i = 0; i < n; ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    double a1 = 1.1 + 3.0 * rng.uniform();
    double a2 = 1.1 + 3.0 * rng.uniform();
    if (a1 > a2) std::swap(a1, a2);
    CHECK(discrete_divergence(a1, p, q) <= discrete_divergence(a2, p, q) + 1e-12);
  }
}

TEST_CASE("post-processing never increases the divergence on random discrete pairs") {
  ldp::RngStream rng(31);
  for (int t = 0; t < 1000; ++t) {
    const int n = 6, m = 3;
    std::vector<double> p(n), q(n);
    double sp = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
      p[i] = rng.uniform() + 0.05;
      q[i] = rng.uniform() + 0.05;
      sp += p[i];
      sq += q[i];
    }
    for (int i = 0; i < n; ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    // random deterministic map from n outcomes onto m
    std::vector<double> fp(m, 0.0), fq(m, 0.0);
    for (int i = 0; i < n; ++i) {
      const int target = static_cast<int>(rng.uniform() * m) % m;
      fp[target] += p[i];
      fq[target] += q[i];
    }
    const double alpha = 1.2 + 3.0 * rng.uniform();
    CHECK(discrete_divergence(alpha, fp, fq) <=
          discrete_divergence(alpha, p, q) + 1e-12);
  }
}

TEST_CASE("curve JSON round trip") {
  const DivergenceCurve curve{{{2.0, 0.125}, {4.0, 0.5}}, Direction::Both};
  const auto back = curve_from_json(curve_to_json(curve));
  REQUIRE(back.knots.size() == 2);
  CHECK(back.knots[1].second == doctest::Approx(0.5));
  CHECK(back.direction == Direction::Both);
}
