#include "scpp/similarity.hpp"

#include <cmath>

namespace scpp {

void SimilarityParams::validate() const {
  if (!(sigma > 0.0)) throw ConfigError("similarity: sigma must be positive");
  if (!(delta > 0.0 && delta <= 0.5)) throw ConfigError("similarity: delta must be in (0, 0.5]");
  if (!(alpha >= 0.0)) throw ConfigError("similarity: alpha must be nonnegative");
  if (!(beta >= 0.0)) throw ConfigError("similarity: beta must be nonnegative");
}

double kernel(double x, double alpha) {
  if (alpha == 0.0) return std::exp(-x);
  return std::pow(x / alpha + 1.0, alpha) * std::exp(-x);
}

double kernel_deriv(double x, double alpha) {
  if (alpha == 0.0) return -std::exp(-x);
  if (x == 0.0) return 0.0;
  return -(x / alpha) * std::pow(x / alpha + 1.0, alpha - 1.0) * std::exp(-x);
}

ConstraintInterval constraint_interval(const Vector& row, const IntVector& counts, double beta) {
  const Index k = row.size();
  if (k != counts.size()) {
    throw DimensionError("constraint_interval: row/count sizes disagree");
  }
  const double total = counts.cast<double>().sum();
  if (!(total >= 1.0)) {
    throw EmptyData("constraint_interval: zero total count");
  }
  if (std::isinf(beta)) {
    return {row.minCoeff() - 1.0, row.maxCoeff() + 1.0};
  }
  double mu = 0.0;
  for (Index i = 0; i < k; ++i) mu += counts[i] * row[i];
  mu /= total;
  double var = 0.0;
  for (Index i = 0; i < k; ++i) {
    const double dev = row[i] - mu;
    var += counts[i] * dev * dev;
  }
  const double sd = std::sqrt(var / total);
  return {mu - beta * sd, mu + beta * sd};
}

double transform_scalar(double z, const ConstraintInterval& iv, double delta) {
  if (z >= iv.lo && z <= iv.hi) return z - iv.lo;
  const double c1 = std::pow(delta * (1.0 - delta), 1.0 / delta);
  const double c2 = delta * std::pow(delta * (1.0 - delta), (1.0 - delta) / delta);
  if (z < iv.lo) {
    return -delta * std::pow(iv.lo - z + c1, 1.0 - delta) + c2;
  }
  return delta * std::pow(z - iv.hi + c1, 1.0 - delta) - c2 + (iv.hi - iv.lo);
}

Vector transform(const Vector& y, const std::vector<ConstraintInterval>& intervals, double delta) {
  if (static_cast<size_t>(y.size()) != intervals.size()) {
    throw DimensionError("transform: vector/interval sizes disagree");
  }
  Vector t(y.size());
  for (Index i = 0; i < y.size(); ++i) {
    t[i] = transform_scalar(y[i], intervals[i], delta);
  }
  return t;
}

Matrix transform_deriv_matrix(const Matrix& P_c, const IntVector& counts, double beta,
                              double delta, Index row) {
  const Index K = P_c.cols();
  if (K == 1) return Matrix::Ones(1, 1);
  if (std::isinf(beta)) {
    // unbounded interval: pure shift, which cancels in every pairwise
    // difference downstream
    return Matrix::Identity(K, K);
  }
  const double total = counts.cast<double>().sum();
  double var = 0.0;
  for (Index k = 0; k < K; ++k) var += counts[k] * P_c(row, k) * P_c(row, k);
  const double sd = std::sqrt(var / total);
  if (!(sd > 0.0)) {
    throw DegenerateProjection("transform_deriv_matrix: zero projected spread");
  }

  const double c1 = std::pow(delta * (1.0 - delta), 1.0 / delta);
  const double dd = delta * (1.0 - delta);
  Matrix D(K, K);
  for (Index j = 0; j < K; ++j) {
    const double z = P_c(row, j);
    // q_k = beta * n_k * P(row,k) / (N * sd): sensitivity of the interval
    // half-width to entry k
    if (z < -beta * sd) {
      const double denom = std::pow(-beta * sd - z + c1, delta);
      for (Index k = 0; k < K; ++k) {
        const double q = beta * counts[k] * P_c(row, k) / (total * sd);
        D(j, k) = (j == k) ? dd * (1.0 + q) / denom : dd * q / denom;
      }
    } else if (z <= beta * sd) {
      for (Index k = 0; k < K; ++k) {
        const double q = beta * counts[k] * P_c(row, k) / (total * sd);
        D(j, k) = (j == k) ? 1.0 + q : q;
      }
    } else {
      const double denom = std::pow(z - beta * sd + c1, delta);
      for (Index k = 0; k < K; ++k) {
        const double q = beta * counts[k] * P_c(row, k) / (total * sd);
        D(j, k) = (j == k) ? 2.0 * q + dd * (1.0 - q) / denom : 2.0 * q - dd * q / denom;
      }
    }
  }
  return D;
}

SymmetricMatrix affinity(const Matrix& T, double sigma, double alpha) {
  if (!(sigma > 0.0)) throw ConfigError("affinity: sigma must be positive");
  const Index K = T.cols();
  Matrix A(K, K);
  for (Index i = 0; i < K; ++i) {
    A(i, i) = 1.0;
    for (Index j = i + 1; j < K; ++j) {
      const double s = kernel((T.col(i) - T.col(j)).norm() / sigma, alpha);
      A(i, j) = s;
      A(j, i) = s;
    }
  }
  return SymmetricMatrix(A);
}

TransformedCenters transformed_coordinates(const Matrix& P_raw, const IntVector& counts,
                                           const SimilarityParams& params) {
  const Index l = P_raw.rows();
  const Index K = P_raw.cols();
  if (K != counts.size()) {
    throw DimensionError("transformed_coordinates: center/count sizes disagree");
  }
  const double total = counts.cast<double>().sum();
  if (!(total >= 1.0)) throw EmptyData("transformed_coordinates: zero total count");

  TransformedCenters out;
  out.P = P_raw;
  for (Index i = 0; i < l; ++i) {
    double mu = 0.0;
    for (Index k = 0; k < K; ++k) mu += counts[k] * out.P(i, k);
    out.P.row(i).array() -= mu / total;
  }
  out.intervals.resize(l);
  out.row_sigma = Vector::Zero(l);
  out.T.resize(l, K);
  for (Index i = 0; i < l; ++i) {
    out.intervals[i] = constraint_interval(out.P.row(i).transpose(), counts, params.beta);
    if (!params.beta_unbounded()) {
      double var = 0.0;
      for (Index k = 0; k < K; ++k) var += counts[k] * out.P(i, k) * out.P(i, k);
      out.row_sigma[i] = std::sqrt(var / total);
    }
    for (Index k = 0; k < K; ++k) {
      out.T(i, k) = transform_scalar(out.P(i, k), out.intervals[i], params.delta);
    }
  }
  return out;
}

}  // namespace scpp
