#include "scpp/microclusters.hpp"

#include <algorithm>
#include <cmath>

#include "scpp/numerics.hpp"
#include "scpp/projection.hpp"

namespace scpp {

namespace {

MicroclusterSummary from_assignments(const Matrix& X, std::vector<int> assign, int K) {
  const Index n = X.cols();
  MicroclusterSummary s;
  s.counts = IntVector::Zero(K);
  s.centers = Matrix::Zero(X.rows(), K);
  for (Index i = 0; i < n; ++i) {
    s.centers.col(assign[i]) += X.col(i);
    ++s.counts[assign[i]];
  }
  for (int c = 0; c < K; ++c) {
    if (s.counts[c] > 0) s.centers.col(c) /= double(s.counts[c]);
  }
  s.radii = Vector::Zero(K);
  for (Index i = 0; i < n; ++i) {
    const double d = (X.col(i) - s.centers.col(assign[i])).norm();
    s.radii[assign[i]] = std::max(s.radii[assign[i]], d);
  }

  if (n <= 2000) {
    double diam = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        diam = std::max(diam, (X.col(i) - X.col(j)).squaredNorm());
      }
    }
    s.diam_x = std::sqrt(diam);
  } else {
    double cd = 0.0;
    for (int a = 0; a < K; ++a) {
      for (int b = a + 1; b < K; ++b) {
        cd = std::max(cd, (s.centers.col(a) - s.centers.col(b)).norm());
      }
    }
    s.diam_x = cd + 2.0 * s.radii.maxCoeff();  // upper bound
  }
  s.source_assignments = std::move(assign);
  return s;
}

}  // namespace

MicroclusterSummary summarize(const Matrix& X, int K, std::uint64_t seed) {
  if (K < 1 || K > X.cols()) {
    throw InvalidK("summarize: need 1 <= K <= N");
  }
  KMeansResult km = kmeans(X, K, seed);
  return from_assignments(X, std::move(km.assignments), K);
}

MicroclusterSummary resummarize_projected(const Matrix& X, const Matrix& V, int K,
                                          std::uint64_t seed) {
  if (K < 1 || K > X.cols()) {
    throw InvalidK("resummarize_projected: need 1 <= K <= N");
  }
  KMeansResult km = kmeans(project(V, X), K, seed);
  return from_assignments(X, std::move(km.assignments), K);
}

int default_microcluster_count(Index N) {
  const Index tenth = (N + 9) / 10;
  return static_cast<int>(std::min<Index>(N, std::max<Index>(200, tenth)));
}

}  // namespace scpp
