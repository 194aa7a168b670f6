#include <doctest.h>

#include <cmath>
#include <random>

#include "scpp/numerics.hpp"
#include "scpp/optimizer.hpp"
#include "test_support.hpp"

using namespace scpp;

namespace {

constexpr double kPi = 3.14159265358979323846;

SimilarityParams params_with(double sigma, double alpha, double beta, double delta = 0.05) {
  SimilarityParams p;
  p.sigma = sigma;
  p.alpha = alpha;
  p.beta = beta;
  p.delta = delta;
  return p;
}

// Three microclusters whose projection under theta0 = [(0,pi/2),(0,0)] is an
// equilateral triangle: lambda2 of the reduced Laplacian has multiplicity 2.
MicroclusterSummary coalescent_instance() {
  MicroclusterSummary s;
  s.centers.resize(3, 3);
  s.centers << 1.0, -0.5, -0.5,
               0.0, std::sqrt(3.0) / 2.0, -std::sqrt(3.0) / 2.0,
               0.3, -0.1, 0.05;
  s.counts = IntVector::Ones(3);
  s.radii = Vector::Zero(3);
  s.diam_x = 2.0;
  s.source_assignments = {0, 1, 2};
  return s;
}

Angles coalescent_theta() {
  Matrix th(2, 2);
  th << 0.0, kPi / 2, 0.0, 0.0;
  return Angles(th);
}

MicroclusterSummary blob_summary(std::mt19937_64& rng, Index d, Index n_each, double gap) {
  const auto [X, member] = testing::two_blobs(d, n_each, gap, 0.25, rng);
  return summarize(X, static_cast<int>(X.cols()), 7);
}

}  // namespace

TEST_CASE("minimize_smooth: quadratic surrogate converges to the target") {
  Matrix target(3, 2);
  target << 0.9, 1.3, 2.1, 0.4, 1.0, 2.8;
  const Objective quad = [&](const Angles& th) {
    EvalReport r;
    const Matrix diff = th.values() - target;
    r.value = diff.squaredNorm();
    r.grad = 2.0 * diff;
    r.lambda2 = r.value;
    return r;
  };
  OptimizerOptions opts;
  opts.grad_tol = 1e-8;
  Matrix start(3, 2);
  start << 0.2, 2.0, 1.0, 1.0, 2.0, 1.5;
  const OptResult res = minimize_smooth(quad, Angles(start), opts);
  CHECK(res.status == OptStatus::converged);
  CHECK(res.report.grad.cwiseAbs().maxCoeff() <= 1e-6);
  CHECK((res.theta.values() - target).norm() < 1e-3);
  for (size_t i = 1; i < res.values.size(); ++i) CHECK(res.values[i] <= res.values[i - 1]);
}

TEST_CASE("minimize_smooth: lambda2 descends on a two-blob instance") {
  std::mt19937_64 rng(139);
  const MicroclusterSummary s = blob_summary(rng, 2, 30, 4.0);
  const auto params = params_with(0.6, 0.1, 2.0);
  const ObjectiveSpec spec{LaplacianKind::standard, 0.0, 1};
  Matrix th0(1, 1);
  th0 << 1.2;
  const Objective obj = [&](const Angles& th) { return evaluate(th, s, spec, params); };
  const OptResult res = minimize_smooth(obj, Angles(th0), OptimizerOptions{});
  CHECK(res.report.value <= evaluate_value(Angles(th0), s, spec, params).value + 1e-14);
  for (size_t i = 1; i < res.values.size(); ++i) CHECK(res.values[i] <= res.values[i - 1]);
  CHECK(res.theta.values().minCoeff() >= 0.0);
  CHECK(res.theta.values().maxCoeff() < kPi);
}

TEST_CASE("dL_dtheta_ij: finite differences, both kinds") {
  std::mt19937_64 rng(149);
  for (int rep = 0; rep < 8; ++rep) {
    const Index d = 3 + rep % 3;
    const Index l = 1 + rep % 2;
    const Index K = 5 + rep % 4;
    const MicroclusterSummary s = testing::random_summary(d, K, 3, rng);
    const auto params = params_with(0.9, 0.1, rep % 2 ? 2.0 : 1.5);
    const LaplacianKind kind = rep % 2 ? LaplacianKind::normalized : LaplacianKind::standard;
    std::uniform_real_distribution<double> u(0.2, kPi - 0.2);
    Matrix th(d - 1, l);
    for (Index i = 0; i < d - 1; ++i) {
      for (Index j = 0; j < l; ++j) th(i, j) = u(rng);
    }
    const Angles theta(th);

    auto reduced_at = [&](const Matrix& tv) {
      const auto rp = detail::assemble_reduced(Angles(tv), s, params);
      return detail::build_reduced(kind, rp.S, s.counts).entries();
    };

    const double h = 1e-6;
    for (Index i = 0; i < d - 1; ++i) {
      for (Index j = 0; j < l; ++j) {
        const SymmetricMatrix dL = dL_dtheta_ij(theta, i, j, s, params, kind);
        CHECK((dL.entries() - dL.entries().transpose()).norm() == 0.0);
        Matrix plus = th, minus = th;
        plus(i, j) += h;
        minus(i, j) -= h;
        const Matrix fd = (reduced_at(plus) - reduced_at(minus)) / (2 * h);
        const double scale = std::max(1e-12, fd.cwiseAbs().maxCoeff());
        CHECK((dL.entries() - fd).cwiseAbs().maxCoeff() <= 1e-5 * std::max(1.0, scale));
      }
    }
  }
}

TEST_CASE("dL_dtheta_ij: Magnus identity against the evaluate gradient") {
  std::mt19937_64 rng(151);
  int tested = 0;
  for (int rep = 0; tested < 6 && rep < 20; ++rep) {
    const Index d = 3 + rep % 3;
    const Index l = 1 + rep % 2;
    const MicroclusterSummary s = testing::random_summary(d, 7, 3, rng);
    const auto params = params_with(0.8, 0.1, 2.0);
    const LaplacianKind kind = rep % 2 ? LaplacianKind::normalized : LaplacianKind::standard;
    std::uniform_real_distribution<double> u(0.2, kPi - 0.2);
    Matrix th(d - 1, l);
    for (Index i = 0; i < d - 1; ++i) {
      for (Index j = 0; j < l; ++j) th(i, j) = u(rng);
    }
    const Angles theta(th);
    const ObjectiveSpec spec{kind, 0.0, l};
    EvalReport er;
    try {
      er = evaluate(theta, s, spec, params);
    } catch (const NonSimpleEigenvalue&) {
      continue;
    }
    const Vector& uvec = er.spectral.u;
    for (Index i = 0; i < d - 1; ++i) {
      for (Index j = 0; j < l; ++j) {
        const SymmetricMatrix dL = dL_dtheta_ij(theta, i, j, s, params, kind);
        const double magnus = uvec.dot(dL.entries() * uvec);
        CHECK(magnus == doctest::Approx(er.grad(i, j)).epsilon(1e-8));
      }
    }
    ++tested;
  }
  CHECK(tested == 6);
}

TEST_CASE("nonsmooth_directional: t = 1 degenerates to the Magnus form") {
  std::mt19937_64 rng(157);
  const MicroclusterSummary s = testing::random_summary(3, 6, 2, rng);
  const auto params = params_with(0.8, 0.1, 2.0);
  Matrix th(2, 1);
  th << 1.0, 0.7;
  const Angles theta(th);
  const ObjectiveSpec spec{LaplacianKind::standard, 0.0, 1};
  const EvalReport er = evaluate(theta, s, spec, params);
  REQUIRE(er.multiplicity == 1);

  std::vector<std::vector<SymmetricMatrix>> L_ij;
  for (Index i = 0; i < 2; ++i) {
    L_ij.push_back({dL_dtheta_ij(theta, i, 0, s, params, LaplacianKind::standard)});
  }
  Matrix dir(2, 1);
  dir << 0.3, -1.1;
  const Matrix Q = er.spectral.u;
  double expected = 0.0;
  for (Index i = 0; i < 2; ++i) {
    expected += dir(i, 0) * er.spectral.u.dot(L_ij[i][0].entries() * er.spectral.u);
  }
  CHECK(nonsmooth_directional(dir, Q, L_ij) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("nonsmooth_directional: coalescent difference quotient and antisymmetry") {
  const MicroclusterSummary s = coalescent_instance();
  const Angles theta0 = coalescent_theta();
  const auto params = params_with(1.0, 0.1, std::numeric_limits<double>::infinity());
  const ObjectiveSpec spec{LaplacianKind::standard, 0.0, 2};

  const EvalReport here = evaluate_value(theta0, s, spec, params);
  REQUIRE(here.multiplicity == 2);
  const Matrix Q = here.spectral.Q;

  std::vector<std::vector<SymmetricMatrix>> L_ij;
  for (Index i = 0; i < 2; ++i) {
    std::vector<SymmetricMatrix> row;
    for (Index j = 0; j < 2; ++j) {
      row.push_back(dL_dtheta_ij(theta0, i, j, s, params, LaplacianKind::standard));
    }
    L_ij.push_back(std::move(row));
  }

  std::mt19937_64 rng(163);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    Matrix dir(2, 2);
    for (Index i = 0; i < 2; ++i) {
      for (Index j = 0; j < 2; ++j) dir(i, j) = normal(rng);
    }
    dir /= dir.norm();
    const double dd = nonsmooth_directional(dir, Q, L_ij);

    // one-sided quotient shrinks towards the directional derivative
    double prev_err = std::numeric_limits<double>::infinity();
    for (const double h : {1e-3, 1e-4, 1e-5}) {
      const Angles shifted(theta0.values() + h * dir);
      const double quotient = (evaluate_value(shifted, s, spec, params).lambda2 - here.lambda2) / h;
      const double err = std::abs(quotient - dd);
      CHECK(err <= std::max(prev_err * 1.05, 5e-4));
      prev_err = err;
    }

    // value along -dir equals minus the largest pencil eigenvalue
    Matrix pencil = Matrix::Zero(Q.cols(), Q.cols());
    for (Index i = 0; i < 2; ++i) {
      for (Index j = 0; j < 2; ++j) {
        pencil += dir(i, j) * (Q.transpose() * L_ij[i][j].entries() * Q);
      }
    }
    const auto eig = sym_eig(SymmetricMatrix(pencil));
    CHECK(nonsmooth_directional(-dir, Q, L_ij) ==
          doctest::Approx(-eig.eigenvalues[eig.eigenvalues.size() - 1]).epsilon(1e-10));
  }
}

TEST_CASE("algorithm1: equals smooth descent when lambda2 stays simple") {
  std::mt19937_64 rng(167);
  const MicroclusterSummary s = blob_summary(rng, 2, 25, 4.0);
  const auto params = params_with(0.6, 0.1, 2.0);
  const ObjectiveSpec spec{LaplacianKind::standard, 0.0, 1};
  Matrix th0(1, 1);
  th0 << 0.9;

  const Objective obj = [&](const Angles& th) { return evaluate(th, s, spec, params); };
  const OptResult smooth = minimize_smooth(obj, Angles(th0), OptimizerOptions{});
  REQUIRE(smooth.status == OptStatus::converged);
  const OptResult alg = algorithm1(Angles(th0), s, spec, params, OptimizerOptions{});
  CHECK(alg.status == OptStatus::converged);
  CHECK(alg.theta.values()(0, 0) == doctest::Approx(smooth.theta.values()(0, 0)).epsilon(1e-12));
  CHECK(alg.report.value == doctest::Approx(smooth.report.value).epsilon(1e-12));
}

TEST_CASE("algorithm1: escapes a constructed coalescence with a descent step") {
  const MicroclusterSummary s = coalescent_instance();
  const Angles theta0 = coalescent_theta();
  const auto params = params_with(1.0, 0.1, std::numeric_limits<double>::infinity());
  const ObjectiveSpec spec{LaplacianKind::standard, 0.0, 2};

  const EvalReport start = evaluate_value(theta0, s, spec, params);
  REQUIRE(start.multiplicity == 2);

  // the escape coordinate the algorithm prefers has a strictly negative
  // directional derivative
  std::vector<std::vector<SymmetricMatrix>> L_ij;
  for (Index i = 0; i < 2; ++i) {
    std::vector<SymmetricMatrix> row;
    for (Index j = 0; j < 2; ++j) {
      row.push_back(dL_dtheta_ij(theta0, i, j, s, params, LaplacianKind::standard));
    }
    L_ij.push_back(std::move(row));
  }
  const Matrix& Q = start.spectral.Q;
  double best = 0.0;
  Matrix best_dir = Matrix::Zero(2, 2);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      const Matrix pencil = Q.transpose() * L_ij[i][j].entries() * Q;
      const auto eig = sym_eig(SymmetricMatrix(pencil));
      const double lt = eig.eigenvalues[eig.eigenvalues.size() - 1];
      const double l1 = eig.eigenvalues[0];
      if (lt > best) {
        best = lt;
        best_dir.setZero();
        best_dir(i, j) = -1.0;
      }
      if (-l1 > best) {
        best = -l1;
        best_dir.setZero();
        best_dir(i, j) = 1.0;
      }
    }
  }
  REQUIRE(best > 1e-8);
  CHECK(nonsmooth_directional(best_dir, Q, L_ij) < 0.0);

  const OptResult res = algorithm1(theta0, s, spec, params, OptimizerOptions{});
  CHECK(res.report.lambda2 < start.lambda2 - 1e-6);
  CHECK(res.theta.values().minCoeff() >= 0.0);
  CHECK(res.theta.values().maxCoeff() < kPi);
}

TEST_CASE("penalty steers column geometry") {
  std::mt19937_64 rng(173);
  const auto params = params_with(0.9, 0.1, 2.0);
  OptimizerOptions opts;
  opts.max_iters = 800;
  std::uniform_real_distribution<double> u(0.3, 2.8);
  for (int rep = 0; rep < 4; ++rep) {
    const MicroclusterSummary s = testing::random_summary(4, 30, 3, rng);
    Matrix th0(3, 2);
    for (Index i = 0; i < 3; ++i) {
      for (Index j = 0; j < 2; ++j) th0(i, j) = u(rng);
    }
    const double l20 =
        evaluate_value(Angles(th0), s, {LaplacianKind::standard, 0.0, 2}, params).lambda2;

    const ObjectiveSpec ortho{LaplacianKind::standard, 10.0 * l20, 2};
    const Matrix V1 = angles_to_matrix(algorithm1(Angles(th0), s, ortho, params, opts).theta);
    CHECK(std::abs(V1.col(0).dot(V1.col(1))) <= 0.1);

    const ObjectiveSpec corr{LaplacianKind::standard, -10.0 * l20, 2};
    const Matrix V2 = angles_to_matrix(algorithm1(Angles(th0), s, corr, params, opts).theta);
    CHECK(std::abs(V2.col(0).dot(V2.col(1))) >= 0.9);
  }
}
