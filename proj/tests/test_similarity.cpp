#include <doctest.h>

#include <cmath>
#include <random>

#include "scpp/similarity.hpp"
#include "test_support.hpp"

using namespace scpp;

TEST_CASE("kernel: pinned values") {
  CHECK(kernel(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(kernel(0.0, 0.1) == doctest::Approx(1.0));
  CHECK(kernel(0.0, 2.0) == doctest::Approx(1.0));
  CHECK(kernel(1.0, 0.0) == doctest::Approx(0.367879441171442).epsilon(1e-13));
  CHECK(kernel(1.0, 0.1) == doctest::Approx(0.467568006342684).epsilon(1e-13));
}

TEST_CASE("kernel: alpha = 0 equals exp(-x) on a grid; decreasing, in (0,1]") {
  double prev = 2.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = i * 0.05;
    CHECK(kernel(x, 0.0) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
    const double k = kernel(x, 0.35);
    CHECK(k > 0.0);
    CHECK(k <= 1.0);
    CHECK(k < prev + 1e-15);
    prev = k;
  }
}

TEST_CASE("kernel_deriv: finite differences, sign, zero limit") {
  const double h = 1e-7;
  for (const double alpha : {0.1, 0.5, 1.0, 3.0}) {
    for (const double x : {0.2, 1.0, 2.5, 7.0}) {
      const double fd = (kernel(x + h, alpha) - kernel(x - h, alpha)) / (2 * h);
      CHECK(kernel_deriv(x, alpha) == doctest::Approx(fd).epsilon(1e-6));
      CHECK(kernel_deriv(x, alpha) <= 0.0);
    }
    CHECK(kernel_deriv(1e-12, alpha) == doctest::Approx(0.0).epsilon(1e-9));
  }
  // alpha = 0: Laplace kernel derivative for x > 0
  CHECK(kernel_deriv(1.0, 0.0) == doctest::Approx(-std::exp(-1.0)));
}

TEST_CASE("constraint_interval: pinned examples") {
  Vector row(2);
  IntVector counts(2);

  row << -1, 1;
  counts << 1, 1;
  auto iv = constraint_interval(row, counts, 1.0);
  CHECK(iv.lo == doctest::Approx(-1.0));
  CHECK(iv.hi == doctest::Approx(1.0));

  iv = constraint_interval(row, counts, 0.0);
  CHECK(iv.lo == doctest::Approx(iv.hi));
  CHECK(iv.lo == doctest::Approx(0.0));

  row << 0, 3;
  counts << 2, 1;
  iv = constraint_interval(row, counts, 1.0);
  CHECK(iv.lo == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(iv.hi == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("constraint_interval: unbounded beta covers all points") {
  Vector row(3);
  row << -5, 0, 7;
  IntVector counts = IntVector::Ones(3);
  const auto iv = constraint_interval(row, counts, std::numeric_limits<double>::infinity());
  CHECK(iv.lo == doctest::Approx(-6.0));
  CHECK(iv.hi == doctest::Approx(8.0));
}

TEST_CASE("constraint_interval: zero count rejected") {
  Vector row(0);
  IntVector counts(0);
  CHECK_THROWS_AS(constraint_interval(row, counts, 1.0), EmptyData);
}

TEST_CASE("transform: pinned branch values") {
  const ConstraintInterval iv{0.0, 1.0};
  CHECK(transform_scalar(0.4, iv, 0.5) == doctest::Approx(0.4));
  CHECK(transform_scalar(1.5, iv, 0.5) == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(transform_scalar(0.0, iv, 0.5) == doctest::Approx(0.0));
  // continuity approaching lo from below
  CHECK(transform_scalar(-1e-12, iv, 0.5) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("transform: contraction, strictly increasing, C1 at boundaries") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (const double delta : {0.05, 0.3, 0.5}) {
    const ConstraintInterval iv{-1.0, 2.0};
    for (int rep = 0; rep < 2000; ++rep) {
      const double x = u(rng), y = u(rng);
      const double tx = transform_scalar(x, iv, delta);
      const double ty = transform_scalar(y, iv, delta);
      CHECK(std::abs(tx - ty) <= std::abs(x - y) + 1e-12);
      const bool outside = x < iv.lo || x > iv.hi || y < iv.lo || y > iv.hi;
      if (outside && std::abs(x - y) > 1e-9) {
        CHECK(std::abs(tx - ty) < std::abs(x - y));
      }
    }
    double prev = transform_scalar(-6.0, iv, delta);
    for (int i = 1; i <= 400; ++i) {
      const double z = -6.0 + i * 0.03;
      const double t = transform_scalar(z, iv, delta);
      CHECK(t > prev);
      prev = t;
    }
    const double h = 1e-6;
    auto slope = [&](double z) {
      return (transform_scalar(z + h, iv, delta) - transform_scalar(z - h, iv, delta)) / (2 * h);
    };
    CHECK(slope(0.5) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(slope(-3.0) < 1.0);
    CHECK(slope(4.0) < 1.0);
    // exact one-sided derivative at the boundary: the outside branch has
    // slope delta*(1-delta)*(dist + c1)^{-delta}, which is 1 at dist = 0
    const double c1 = std::pow(delta * (1.0 - delta), 1.0 / delta);
    CHECK(delta * (1.0 - delta) * std::pow(c1, -delta) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // one-sided difference quotients agree where the quotient itself is
  // resolvable (small delta sends the outer curvature constant below
  // double precision, so the grid sticks to moderate delta)
  for (const double delta : {0.3, 0.5}) {
    const ConstraintInterval iv{-1.0, 2.0};
    const double h = 1e-8;
    for (const double b : {iv.lo, iv.hi}) {
      const double left = (transform_scalar(b, iv, delta) - transform_scalar(b - h, iv, delta)) / h;
      const double right = (transform_scalar(b + h, iv, delta) - transform_scalar(b, iv, delta)) / h;
      CHECK(std::abs(left - right) <= 1e-5);
    }
  }
}

TEST_CASE("transform: multivariate vector form") {
  std::vector<ConstraintInterval> ivs{{0.0, 1.0}, {-2.0, 2.0}};
  Vector y(2);
  y << 0.4, -3.0;
  const Vector t = transform(y, ivs, 0.5);
  CHECK(t[0] == doctest::Approx(0.4));
  CHECK(t[1] == doctest::Approx(transform_scalar(-3.0, ivs[1], 0.5)));
}

namespace {

// Finite-difference oracle: transform entry j of the centered row after
// recomputing the interval half-width from the perturbed row (the weighted
// mean stays pinned at zero, matching the centered convention).
double transform_fd(const Matrix& P, const IntVector& counts, double beta, double delta,
                    Index row, Index j, Index k, double h) {
  auto value = [&](double shift) {
    Vector r = P.row(row).transpose();
    r[k] += shift;
    double var = 0.0;
    const double total = counts.cast<double>().sum();
    for (Index m = 0; m < r.size(); ++m) var += counts[m] * r[m] * r[m];
    const double sd = std::sqrt(var / total);
    const ConstraintInterval iv{-beta * sd, beta * sd};
    return transform_scalar(r[j], iv, delta);
  };
  return (value(h) - value(-h)) / (2 * h);
}

}  // namespace

TEST_CASE("transform_deriv_matrix: interior branch equals the closed-form coefficients") {
  Matrix P(1, 3);
  P << -0.25, 0.2, 0.3;
  IntVector counts(3);
  counts << 2, 1, 1;
  const double beta = 2.0, delta = 0.3;
  const double total = 4.0;
  double var = 0.0;
  for (Index k = 0; k < 3; ++k) var += counts[k] * P(0, k) * P(0, k);
  const double sd = std::sqrt(var / total);
  REQUIRE(P.row(0).minCoeff() > -beta * sd);
  REQUIRE(P.row(0).maxCoeff() < beta * sd);

  const Matrix D = transform_deriv_matrix(P, counts, beta, delta, 0);
  for (Index j = 0; j < 3; ++j) {
    for (Index k = 0; k < 3; ++k) {
      const double q = beta * counts[k] * P(0, k) / (total * sd);
      const double expected = (j == k) ? 1.0 + q : q;
      CHECK(D(j, k) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("transform_deriv_matrix: matches finite differences across branches") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    const Index K = 3 + rep % 6;
    IntVector counts = testing::random_counts(K, 4, rng);
    Matrix P(1, K);
    for (Index k = 0; k < K; ++k) P(0, k) = normal(rng);
    const double total = counts.cast<double>().sum();
    double mu = 0.0;
    for (Index k = 0; k < K; ++k) mu += counts[k] * P(0, k);
    P.array() -= mu / total;

    const double beta = 0.5 + 0.2 * (rep % 4);  // small beta pushes points outside
    const double delta = 0.1 + 0.1 * (rep % 4);
    const Matrix D = transform_deriv_matrix(P, counts, beta, delta, 0);
    for (Index j = 0; j < K; ++j) {
      for (Index k = 0; k < K; ++k) {
        const double fd = transform_fd(P, counts, beta, delta, 0, j, k, 1e-6);
        CHECK(D(j, k) == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("transform_deriv_matrix: K = 1 and degenerate row") {
  Matrix single(1, 1);
  single << 0.0;
  IntVector one = IntVector::Ones(1);
  const Matrix D = transform_deriv_matrix(single, one, 1.5, 0.3, 0);
  CHECK(D.rows() == 1);
  CHECK(D(0, 0) == doctest::Approx(1.0));

  Matrix flat(1, 3);
  flat << 0, 0, 0;
  IntVector counts = IntVector::Ones(3);
  CHECK_THROWS_AS(transform_deriv_matrix(flat, counts, 1.5, 0.3, 0), DegenerateProjection);
}

TEST_CASE("affinity: identical points, pinned value, symmetry and positivity") {
  Matrix T(1, 2);
  T << 0.7, 0.7;
  auto A = affinity(T, 1.0, 0.1);
  CHECK(A(0, 1) == doctest::Approx(1.0));
  CHECK(A(0, 0) == doctest::Approx(1.0));

  T << 0.0, 1.0;
  A = affinity(T, 1.0, 0.0);
  CHECK(A(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  std::mt19937_64 rng(47);
  const Matrix R = testing::random_matrix(3, 12, rng);
  const auto B = affinity(R, 0.8, 0.1);
  CHECK((B.entries() - B.entries().transpose()).norm() == doctest::Approx(0.0));
  CHECK(B.entries().minCoeff() > 0.0);
}

TEST_CASE("transformed_coordinates: centers rows and applies the transform") {
  std::mt19937_64 rng(53);
  const Matrix P = testing::random_matrix(2, 6, rng);
  IntVector counts = testing::random_counts(6, 3, rng);
  SimilarityParams params;
  params.sigma = 1.0;
  params.delta = 0.2;
  params.beta = 1.5;
  const auto tc = transformed_coordinates(P, counts, params);
  const double total = counts.cast<double>().sum();
  for (Index i = 0; i < 2; ++i) {
    double mu = 0.0;
    for (Index k = 0; k < 6; ++k) mu += counts[k] * tc.P(i, k);
    CHECK(mu / total == doctest::Approx(0.0).epsilon(1e-12));
    for (Index k = 0; k < 6; ++k) {
      CHECK(tc.T(i, k) ==
            doctest::Approx(transform_scalar(tc.P(i, k), tc.intervals[i], params.delta)));
    }
  }
}

TEST_CASE("similarity params validation") {
  SimilarityParams p;
  p.sigma = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.sigma = 1.0;
  p.delta = 0.6;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.delta = 0.01;
  CHECK_NOTHROW(p.validate());
}
