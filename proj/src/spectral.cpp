#include "scpp/spectral.hpp"

#include <cmath>

#include "scpp/numerics.hpp"

namespace scpp {

namespace detail {

Matrix kernel_matrix(const Matrix& T, double sigma, double alpha) {
  const Index K = T.cols();
  Matrix S(K, K);
  for (Index i = 0; i < K; ++i) {
    S(i, i) = 1.0;
    for (Index j = i + 1; j < K; ++j) {
      const double s = kernel((T.col(i) - T.col(j)).norm() / sigma, alpha);
      S(i, j) = s;
      S(j, i) = s;
    }
  }
  return S;
}

SymmetricMatrix build_reduced(LaplacianKind kind, const Matrix& S, const IntVector& counts) {
  const Index K = S.rows();
  const Vector n = counts.cast<double>();
  if (kind == LaplacianKind::standard) {
    Matrix NB = Matrix::Zero(K, K);
    for (Index i = 0; i < K; ++i) {
      double deg = 0.0;
      for (Index j = 0; j < K; ++j) deg += n[j] * S(i, j);
      NB(i, i) = deg;
    }
    for (Index i = 0; i < K; ++i) {
      for (Index j = 0; j < K; ++j) {
        NB(i, j) -= std::sqrt(n[i] * n[j]) * S(i, j);
      }
    }
    return SymmetricMatrix(NB);
  }
  Matrix A(K, K);
  for (Index i = 0; i < K; ++i) {
    for (Index j = 0; j < K; ++j) {
      A(i, j) = n[i] * n[j] * S(i, j);
    }
  }
  return laplacian(SymmetricMatrix(A), LaplacianKind::normalized);
}

Vector weighted_degrees(const Matrix& S, const IntVector& counts) {
  const Index K = S.rows();
  const Vector n = counts.cast<double>();
  Vector d(K);
  for (Index i = 0; i < K; ++i) {
    double acc = 0.0;
    for (Index j = 0; j < K; ++j) acc += n[i] * n[j] * S(i, j);
    d[i] = acc;
  }
  return d;
}

}  // namespace detail

SymmetricMatrix laplacian(const SymmetricMatrix& A, LaplacianKind kind) {
  const Index n = A.order();
  if (A.entries().minCoeff() < 0.0) {
    throw InvalidMatrix("laplacian: affinity entries must be nonnegative");
  }
  const Vector deg = A.entries().rowwise().sum();
  if (deg.minCoeff() <= 0.0) {
    throw DegenerateGraph("laplacian: zero-degree vertex");
  }
  Matrix L = -A.entries();
  L.diagonal() += deg;
  if (kind == LaplacianKind::standard) {
    return SymmetricMatrix(L);
  }
  const Vector inv_sqrt = deg.cwiseSqrt().cwiseInverse();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      L(i, j) *= inv_sqrt[i] * inv_sqrt[j];
    }
  }
  return SymmetricMatrix(L);
}

SymmetricMatrix reduced_standard(const Matrix& P_c, const IntVector& counts,
                                 const SimilarityParams& params) {
  const TransformedCenters tc = transformed_coordinates(P_c, counts, params);
  const Matrix S = detail::kernel_matrix(tc.T, params.sigma, params.alpha);
  return detail::build_reduced(LaplacianKind::standard, S, counts);
}

SymmetricMatrix reduced_normalized(const Matrix& P_c, const IntVector& counts,
                                   const SimilarityParams& params) {
  const TransformedCenters tc = transformed_coordinates(P_c, counts, params);
  const Matrix S = detail::kernel_matrix(tc.T, params.sigma, params.alpha);
  return detail::build_reduced(LaplacianKind::normalized, S, counts);
}

SpectralResult second_eigenpair(const SymmetricMatrix& L) {
  if (L.order() < 2) {
    throw TooSmall("second_eigenpair: need order >= 2");
  }
  const EigenDecomposition eig = sym_eig(L);
  SpectralResult r;
  r.full_spectrum = eig.eigenvalues;
  r.lambda2 = eig.eigenvalues[1];

  // Coalescence tolerance: relative to lambda2, floored at the eigensolver's
  // resolution (~eps * ||L||). An absolute 1e-8 would merge relatively
  // separated eigenvalues once the whole spectrum anneals below 1e-8.
  const double scale = eig.eigenvalues.cwiseAbs().maxCoeff();
  const double tol = std::max(1e-8 * std::abs(r.lambda2), 1e-12 * scale);
  // index 0 holds the structurally-zero eigenvalue of a connected graph; its
  // eigenvector is the known trivial direction, so it is not coalesced in.
  Index first = 1;
  Index last = 1;
  while (last + 1 < eig.eigenvalues.size() &&
         std::abs(eig.eigenvalues[last + 1] - r.lambda2) <= tol) {
    ++last;
  }
  r.multiplicity = static_cast<int>(last - first + 1);
  r.Q = eig.eigenvectors.middleCols(first, r.multiplicity);

  Vector u = eig.eigenvectors.col(1);
  Index imax = 0;
  u.cwiseAbs().maxCoeff(&imax);
  if (u[imax] < 0.0) u = -u;
  r.u = u;
  return r;
}

double error_bound(const Vector& radii, double diam_x, double sigma, double alpha) {
  const Index K = radii.size();
  if (K < 2) return 0.0;
  double bound = 0.0;
  for (Index i = 0; i < K; ++i) {
    for (Index j = i + 1; j < K; ++j) {
      const double s = radii[i] + radii[j];
      const double ratio = (diam_x + sigma * alpha) / (diam_x + s + sigma * alpha);
      const double value = std::pow(ratio, alpha) * std::exp(s / sigma) - 1.0;
      bound = std::max(bound, value);
    }
  }
  return bound;
}

}  // namespace scpp
