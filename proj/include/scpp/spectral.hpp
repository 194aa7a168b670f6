#pragma once

#include "scpp/similarity.hpp"
#include "scpp/types.hpp"

namespace scpp {

enum class LaplacianKind { standard, normalized };

struct SpectralResult {
  double lambda2 = 0.0;
  Vector u;              // unit eigenvector for lambda2, largest entry positive
  int multiplicity = 1;  // eigenvalues within tol_mult of lambda2
  Matrix Q;              // the multiplicity eigenvectors, orthonormal
  Vector full_spectrum;  // ascending
};

// L = D - A or D^{-1/2} L D^{-1/2}; degrees include the diagonal entry.
// Requires nonnegative entries; throws DegenerateGraph on a zero degree.
SymmetricMatrix laplacian(const SymmetricMatrix& A, LaplacianKind kind);

// Microcluster reduction of the standard Laplacian: N - B with
// N_ii = sum_j n_j s(i,j) and B_ij = sqrt(n_i n_j) s(i,j), where s is the
// kernel similarity of the transformed projected centers. lambda2 equals
// lambda2 of the Laplacian of the count-expanded point multiset.
SymmetricMatrix reduced_standard(const Matrix& P_c, const IntVector& counts,
                                 const SimilarityParams& params);

// Normalized Laplacian of the K-node graph with similarities n_i n_j s(i,j).
SymmetricMatrix reduced_normalized(const Matrix& P_c, const IntVector& counts,
                                   const SimilarityParams& params);

// Second-smallest eigenpair with multiplicity detection. Eigenvalues within
// 1e-8 * max(1, lambda2) of lambda2 coalesce; the structurally-zero first
// eigenvalue is not counted. Throws TooSmall for order < 2.
SpectralResult second_eigenpair(const SymmetricMatrix& L);

// Worst-case bound on the relative lambda2 error of reduced_standard:
// max over i != j of ((diam + s*a)/(diam + r_i + r_j + s*a))^a * exp((r_i + r_j)/s) - 1.
double error_bound(const Vector& radii, double diam_x, double sigma, double alpha);

// Raised on gradient paths when lambda2 is not simple; carries the spectral
// payload (Q in particular) so the optimizer can switch to the nonsmooth step.
struct NonSimpleEigenvalue : std::runtime_error {
  NonSimpleEigenvalue(SpectralResult sp, double objective_value)
      : std::runtime_error("lambda2 has multiplicity " + std::to_string(sp.multiplicity)),
        spectral(std::move(sp)),
        value(objective_value) {}
  SpectralResult spectral;
  double value;  // lambda2 + penalty at the offending point
};

namespace detail {
// Kernel similarity matrix s(i,j) of the columns of T (diagonal 1).
Matrix kernel_matrix(const Matrix& T, double sigma, double alpha);
// Reduced matrix of the requested kind from a precomputed kernel matrix.
SymmetricMatrix build_reduced(LaplacianKind kind, const Matrix& S, const IntVector& counts);
// Degrees of the weighted reduced graph, d_i = sum_j n_i n_j s(i,j).
Vector weighted_degrees(const Matrix& S, const IntVector& counts);
}  // namespace detail

}  // namespace scpp
