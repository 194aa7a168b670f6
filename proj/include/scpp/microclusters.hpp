#pragma once

#include <cstdint>
#include <vector>

#include "scpp/types.hpp"

namespace scpp {

struct MicroclusterSummary {
  Matrix centers;                       // d x K, exact member means
  IntVector counts;                     // K, sum = N
  Vector radii;                         // K, max member distance to center
  double diam_x = 0.0;                  // data diameter (exact or upper bound)
  std::vector<int> source_assignments;  // length N

  Index size() const { return centers.cols(); }
  Index total() const { return static_cast<Index>(source_assignments.size()); }
};

// k-means partition of X into K microclusters. The diameter is exact for
// N <= 2000, otherwise the upper bound max center distance + 2 * max radius.
MicroclusterSummary summarize(const Matrix& X, int K, std::uint64_t seed);

// Assignments computed by k-means on V^T X; centers, counts and radii are
// then measured in the original d-dimensional space.
MicroclusterSummary resummarize_projected(const Matrix& X, const Matrix& V, int K,
                                          std::uint64_t seed);

// min(N, max(200, ceil(0.1 N))): exact mode up to 200 points.
int default_microcluster_count(Index N);

}  // namespace scpp
