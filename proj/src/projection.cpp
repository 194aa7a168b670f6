#include "scpp/projection.hpp"

#include <algorithm>
#include <cmath>

namespace scpp {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double wrap_angle(double x) {
  double y = std::fmod(x, kPi);
  if (y < 0.0) y += kPi;
  if (y >= kPi) y = 0.0;  // fmod roundoff can land exactly on pi
  return y;
}

Angles::Angles(Matrix values) : values_(std::move(values)) {
  values_ = values_.unaryExpr([](double x) { return wrap_angle(x); });
}

Matrix angles_to_matrix(const Angles& theta) {
  const Index d = theta.ambient_dim();
  const Index l = theta.dims();
  if (d < 2) {
    throw DimensionError("angles_to_matrix: need ambient dimension >= 2");
  }
  Matrix V(d, l);
  for (Index j = 0; j < l; ++j) {
    double sin_prod = 1.0;
    for (Index i = 0; i < d - 1; ++i) {
      V(i, j) = std::cos(theta.values()(i, j)) * sin_prod;
      sin_prod *= std::sin(theta.values()(i, j));
    }
    V(d - 1, j) = sin_prod;
  }
  return V;
}

Vector vector_to_angles(const Vector& v) {
  const Index d = v.size();
  if (d < 2) {
    throw DimensionError("vector_to_angles: need dimension >= 2");
  }
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > 1e-8) {
    throw NotNormalized("vector_to_angles: input does not have unit norm");
  }
  Vector w = v;
  if (w[d - 1] < 0.0) w = -w;  // the polar image has nonnegative last coordinate

  Vector theta(d - 1);
  for (Index i = 0; i < d - 1; ++i) {
    const double suffix = w.tail(d - i).norm();
    if (suffix < 1e-12) {
      theta.tail(d - 1 - i).setZero();
      break;
    }
    const double c = std::clamp(w[i] / suffix, -1.0, 1.0);
    theta[i] = wrap_angle(std::acos(c));
  }
  return theta;
}

Matrix dV_dtheta(const Angles& theta, Index j) {
  const Index d = theta.ambient_dim();
  Matrix D = Matrix::Zero(d, d - 1);
  const auto& th = theta.values();

  // prefix[i] = prod_{k<i} sin(theta(k,j))
  Vector prefix(d);
  prefix[0] = 1.0;
  for (Index i = 1; i < d; ++i) {
    prefix[i] = prefix[i - 1] * std::sin(th(i - 1, j));
  }

  for (Index c = 0; c < d - 1; ++c) {
    // r == c: the cosine factor differentiates
    D(c, c) = -std::sin(th(c, j)) * prefix[c];
    // c < r < d-1: one sine factor differentiates
    for (Index r = c + 1; r < d - 1; ++r) {
      double prod = 1.0;
      for (Index k = 0; k < r; ++k) {
        prod *= (k == c) ? std::cos(th(k, j)) : std::sin(th(k, j));
      }
      D(r, c) = std::cos(th(r, j)) * prod;
    }
    double prod = 1.0;
    for (Index k = 0; k < d - 1; ++k) {
      prod *= (k == c) ? std::cos(th(k, j)) : std::sin(th(k, j));
    }
    D(d - 1, c) = prod;
  }
  return D;
}

Matrix project(const Matrix& V, const Matrix& X) {
  if (V.rows() != X.rows()) {
    throw DimensionError("project: projection and data dimensions disagree");
  }
  return V.transpose() * X;
}

}  // namespace scpp
