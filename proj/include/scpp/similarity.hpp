#pragma once

#include <limits>
#include <vector>

#include "scpp/types.hpp"

namespace scpp {

struct SimilarityParams {
  double sigma = 1.0;   // scaling
  double delta = 0.01;  // distance reduction, in (0, 0.5]
  double alpha = 0.1;   // kernel shape, >= 0
  double beta = std::numeric_limits<double>::infinity();  // constraint width

  bool beta_unbounded() const { return std::isinf(beta); }
  void validate() const;
};

// k(x) = (x/alpha + 1)^alpha * exp(-x) for x >= 0, with the convention
// (a/0)^0 = 1, so alpha = 0 gives exp(-x). Values lie in (0, 1].
double kernel(double x, double alpha);

// dk/dx for x > 0; the one-sided limit at 0 is 0 for alpha > 0.
double kernel_deriv(double x, double alpha);

struct ConstraintInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// [mu - beta*s, mu + beta*s] with mu, s the count-weighted mean and standard
// deviation of the row. beta = +inf yields [min - 1, max + 1], which turns
// the transform into a pure shift. Throws EmptyData on zero total count.
ConstraintInterval constraint_interval(const Vector& row, const IntVector& counts, double beta);

// Coordinatewise contraction: linear with slope 1 inside the interval,
// strictly increasing with slope < 1 outside, C^1 at the boundaries.
double transform_scalar(double z, const ConstraintInterval& iv, double delta);
Vector transform(const Vector& y, const std::vector<ConstraintInterval>& intervals, double delta);

// K x K Jacobian of the transformed row i with respect to the raw projected
// entries of row i, including the indirect dependence through the weighted
// standard deviation (the weighted mean is treated as identically zero, so
// the caller must pass centered rows). Throws DegenerateProjection when the
// row's weighted standard deviation vanishes (K > 1, finite beta).
Matrix transform_deriv_matrix(const Matrix& P_c, const IntVector& counts, double beta,
                              double delta, Index row);

// A(i,j) = kernel(||t_i - t_j|| / sigma, alpha) over the columns of T;
// diagonal 1, strictly positive.
SymmetricMatrix affinity(const Matrix& T, double sigma, double alpha);

// Shared per-evaluation pipeline: center rows by the count-weighted mean,
// build the per-dimension intervals, apply the transform.
struct TransformedCenters {
  Matrix P;                                  // centered projected centers, l x K
  Matrix T;                                  // transformed coordinates, l x K
  std::vector<ConstraintInterval> intervals; // one per projection dimension
  Vector row_sigma;                          // weighted sd per row (0 when beta = inf)
};
TransformedCenters transformed_coordinates(const Matrix& P_raw, const IntVector& counts,
                                           const SimilarityParams& params);

}  // namespace scpp
