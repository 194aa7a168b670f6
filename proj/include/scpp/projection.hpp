#pragma once

#include "scpp/types.hpp"

namespace scpp {

// Wraps x into [0, pi).
double wrap_angle(double x);

// Polar angles parameterizing a d x l projection matrix with unit-norm
// columns. Entries live in [0, pi); construction wraps modulo pi.
class Angles {
 public:
  Angles() = default;
  explicit Angles(Matrix values);

  static Angles zero(Index ambient_dim, Index dims) {
    return Angles(Matrix::Zero(ambient_dim - 1, dims));
  }

  const Matrix& values() const { return values_; }
  Index rows() const { return values_.rows(); }        // d - 1
  Index dims() const { return values_.cols(); }        // l
  Index ambient_dim() const { return values_.rows() + 1; }

 private:
  Matrix values_;
};

// V(theta), d x l. Column j: V(i,j) = cos(theta(i,j)) * prod_{k<i} sin(theta(k,j))
// for i < d-1 (0-based), last row is the full sine product. Columns have unit
// norm and a nonnegative last entry.
Matrix angles_to_matrix(const Angles& theta);

// Inverse of the polar map on a single unit vector. The result reproduces v
// or -v under angles_to_matrix; v is negated first when its last coordinate
// is negative. Throws NotNormalized unless ||v|| = 1 within 1e-8.
Vector vector_to_angles(const Vector& v);

// d x (d-1) matrix of partial derivatives of column j of V(theta) with
// respect to the angles of column j; entry (r, c) = dV(r,j)/dtheta(c,j),
// zero for r < c.
Matrix dV_dtheta(const Angles& theta, Index j);

// P = V^T X. Throws DimensionError when the row counts disagree.
Matrix project(const Matrix& V, const Matrix& X);

}  // namespace scpp
