#pragma once

#include <cstdint>
#include <vector>

#include "scpp/types.hpp"

namespace scpp {

struct EigenDecomposition {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal, column k pairs with eigenvalues[k]
};

// Full dense symmetric eigendecomposition. Throws InvalidMatrix on non-finite
// entries.
EigenDecomposition sym_eig(const SymmetricMatrix& M);

// Columns are the unit eigenvectors of the sample covariance of X (d x N,
// one observation per column) for its l largest eigenvalues, ordered by
// decreasing eigenvalue.
Matrix pca_components(const Matrix& X, Index l);

struct KMeansResult {
  std::vector<int> assignments;  // length N, values in [0, K)
  Matrix centers;                // d x K, exact means of the members
};

// Lloyd iterations with k-means++ seeding. Deterministic for a given seed;
// empty clusters are reseeded to the point farthest from its center.
KMeansResult kmeans(const Matrix& X, int K, std::uint64_t seed);

}  // namespace scpp
