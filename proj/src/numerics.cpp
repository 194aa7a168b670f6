#include "scpp/numerics.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace scpp {

EigenDecomposition sym_eig(const SymmetricMatrix& M) {
  if (!M.entries().allFinite()) {
    throw InvalidMatrix("sym_eig: matrix has non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(M.entries());
  if (solver.info() != Eigen::Success) {
    throw InvalidMatrix("sym_eig: eigendecomposition failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix pca_components(const Matrix& X, Index l) {
  const Index d = X.rows();
  const Index n = X.cols();
  if (l < 1 || l > d) {
    throw DimensionError("pca_components: need 1 <= l <= d");
  }
  if (n < 2) {
    throw DimensionError("pca_components: need at least 2 observations");
  }
  const Vector mean = X.rowwise().mean();
  const Matrix centered = X.colwise() - mean;
  const SymmetricMatrix cov(centered * centered.transpose() / double(n - 1));
  const EigenDecomposition eig = sym_eig(cov);
  Matrix components(d, l);
  for (Index k = 0; k < l; ++k) {
    components.col(k) = eig.eigenvectors.col(d - 1 - k);
  }
  return components;
}

namespace {

int nearest_center(const Matrix& X, const Matrix& centers, Index point, int K) {
  int best = 0;
  double best_d = (X.col(point) - centers.col(0)).squaredNorm();
  for (int c = 1; c < K; ++c) {
    const double d = (X.col(point) - centers.col(c)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

Matrix seed_plusplus(const Matrix& X, int K, std::mt19937_64& rng) {
  const Index n = X.cols();
  Matrix centers(X.rows(), K);
  std::vector<bool> chosen(n, false);
  std::uniform_int_distribution<Index> uniform(0, n - 1);
  const Index first = uniform(rng);
  centers.col(0) = X.col(first);
  chosen[first] = true;

  Vector dist2(n);
  for (Index i = 0; i < n; ++i) {
    dist2[i] = (X.col(i) - centers.col(0)).squaredNorm();
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < K; ++c) {
    const double total = dist2.sum();
    Index pick = -1;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    }
    if (pick < 0 || chosen[pick]) {
      // all remaining mass on duplicates, or roundoff hit a chosen point
      for (Index i = 0; i < n; ++i) {
        if (!chosen[i]) {
          pick = i;
          break;
        }
      }
    }
    centers.col(c) = X.col(pick);
    chosen[pick] = true;
    for (Index i = 0; i < n; ++i) {
      dist2[i] = std::min(dist2[i], (X.col(i) - centers.col(c)).squaredNorm());
    }
  }
  return centers;
}

void recompute_means(const Matrix& X, const std::vector<int>& assign, int K, Matrix& centers,
                     std::vector<int>& sizes) {
  sizes.assign(K, 0);
  centers.setZero();
  for (Index i = 0; i < X.cols(); ++i) {
    centers.col(assign[i]) += X.col(i);
    ++sizes[assign[i]];
  }
  for (int c = 0; c < K; ++c) {
    if (sizes[c] > 0) centers.col(c) /= double(sizes[c]);
  }
}

// Moves the point farthest from its center into each empty cluster.
void fix_empty_clusters(const Matrix& X, std::vector<int>& assign, int K, Matrix& centers,
                        std::vector<int>& sizes) {
  for (int c = 0; c < K; ++c) {
    if (sizes[c] > 0) continue;
    Index far = -1;
    double far_d = -1.0;
    for (Index i = 0; i < X.cols(); ++i) {
      if (sizes[assign[i]] <= 1) continue;
      const double d = (X.col(i) - centers.col(assign[i])).squaredNorm();
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far < 0) continue;  // nothing to donate (more clusters than distinct points)
    --sizes[assign[far]];
    assign[far] = c;
    sizes[c] = 1;
    recompute_means(X, assign, K, centers, sizes);
  }
}

}  // namespace

KMeansResult kmeans(const Matrix& X, int K, std::uint64_t seed) {
  const Index n = X.cols();
  if (K < 1 || K > n) {
    throw InvalidK("kmeans: need 1 <= K <= N");
  }
  std::mt19937_64 rng(seed);
  Matrix centers = seed_plusplus(X, K, rng);
  std::vector<int> assign(n, -1);
  std::vector<int> sizes;

  constexpr int kMaxIters = 100;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      const int c = nearest_center(X, centers, i, K);
      if (c != assign[i]) {
        assign[i] = c;
        changed = true;
      }
    }
    recompute_means(X, assign, K, centers, sizes);
    fix_empty_clusters(X, assign, K, centers, sizes);
    if (!changed) break;
  }
  return {std::move(assign), std::move(centers)};
}

}  // namespace scpp
