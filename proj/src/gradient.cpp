#include "scpp/gradient.hpp"

#include <cmath>

namespace scpp {

namespace {

// Pairwise coefficient multiplying ds(j,m) in d lambda2.
double pair_coefficient(LaplacianKind kind, const SpectralResult& sp, const Vector& n,
                        const Vector& degrees, Index j, Index m) {
  const Vector& u = sp.u;
  if (kind == LaplacianKind::standard) {
    const double w = u[j] / std::sqrt(n[j]) - u[m] / std::sqrt(n[m]);
    return w * w * n[j] * n[m];
  }
  const double w = u[j] / std::sqrt(degrees[j]) - u[m] / std::sqrt(degrees[m]);
  const double shift = sp.lambda2 * (u[j] * u[j] / degrees[j] + u[m] * u[m] / degrees[m]);
  return (w * w - shift) * n[j] * n[m];
}

}  // namespace

Matrix dlambda_dP(LaplacianKind kind, const SpectralResult& spectral, const IntVector& counts,
                  const Vector& degrees, const Matrix& T, const Matrix& P_c,
                  const SimilarityParams& params) {
  const Index l = T.rows();
  const Index K = T.cols();
  if (spectral.multiplicity != 1) {
    throw NonSimpleEigenvalue(spectral, spectral.lambda2);
  }
  const Vector n = counts.cast<double>();
  const double total = n.sum();
  const double sigma = params.sigma;

  // d lambda / d T
  Matrix gT = Matrix::Zero(l, K);
  for (Index m = 0; m < K; ++m) {
    for (Index j = 0; j < K; ++j) {
      if (j == m) continue;
      const double dist = (T.col(j) - T.col(m)).norm();
      if (dist < 1e-14) continue;  // kernel_deriv -> 0, direction undefined
      const double coeff = pair_coefficient(kind, spectral, n, degrees, j, m);
      const double kd = kernel_deriv(dist / sigma, params.alpha) / (sigma * dist);
      for (Index i = 0; i < l; ++i) {
        gT(i, m) += coeff * kd * (T(i, m) - T(i, j));
      }
    }
  }

  // compose with the transform Jacobian row by row, then with the
  // count-weighted centering (d(P_ij - mu_i)/dP_ik = delta_jk - n_k/N)
  Matrix gP(l, K);
  for (Index i = 0; i < l; ++i) {
    const Matrix D = transform_deriv_matrix(P_c, counts, params.beta, params.delta, i);
    gP.row(i) = gT.row(i) * D;
    const double rowsum = gP.row(i).sum();
    for (Index k = 0; k < K; ++k) {
      gP(i, k) -= rowsum * n[k] / total;
    }
  }
  return gP;
}

std::pair<double, Matrix> penalty_and_grad(const Angles& theta, double omega) {
  const Index l = theta.dims();
  const Index d = theta.ambient_dim();
  Matrix grad = Matrix::Zero(d - 1, l);
  if (l < 2 || omega == 0.0) {
    return {0.0, grad};
  }
  const Matrix V = angles_to_matrix(theta);
  const Matrix G = V.transpose() * V;
  double value = 0.0;
  for (Index i = 0; i < l; ++i) {
    for (Index j = 0; j < l; ++j) {
      if (i != j) value += G(i, j) * G(i, j);
    }
  }
  value *= omega;
  for (Index i = 0; i < l; ++i) {
    const Matrix Dv = dV_dtheta(theta, i);  // d x (d-1)
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(d - 1);
    for (Index j = 0; j < l; ++j) {
      if (j == i) continue;
      acc += G(i, j) * (V.col(j).transpose() * Dv);
    }
    grad.col(i) = (4.0 * omega * acc).transpose();
  }
  return {value, grad};
}

namespace detail {

ReducedProblem assemble_reduced(const Angles& theta, const MicroclusterSummary& summary,
                                const SimilarityParams& params) {
  params.validate();
  ReducedProblem a;
  const Vector n = summary.counts.cast<double>();
  const double total = n.sum();
  const Vector cbar = summary.centers * n / total;
  a.C_centered = summary.centers.colwise() - cbar;
  const Matrix V = angles_to_matrix(theta);
  a.tc = transformed_coordinates(V.transpose() * a.C_centered, summary.counts, params);
  a.S = kernel_matrix(a.tc.T, params.sigma, params.alpha);
  return a;
}

}  // namespace detail

namespace {

struct Assembled {
  detail::ReducedProblem rp;
  SpectralResult spectral;
  Vector degrees;  // weighted reduced-graph degrees (normalized kind)
};

Assembled assemble(const Angles& theta, const MicroclusterSummary& summary,
                   const ObjectiveSpec& spec, const SimilarityParams& params) {
  Assembled a;
  a.rp = detail::assemble_reduced(theta, summary, params);
  const SymmetricMatrix L = detail::build_reduced(spec.kind, a.rp.S, summary.counts);
  a.spectral = second_eigenpair(L);
  if (spec.kind == LaplacianKind::normalized) {
    a.degrees = detail::weighted_degrees(a.rp.S, summary.counts);
  }
  return a;
}

}  // namespace

EvalReport evaluate_value(const Angles& theta, const MicroclusterSummary& summary,
                          const ObjectiveSpec& spec, const SimilarityParams& params) {
  const Assembled a = assemble(theta, summary, spec, params);
  EvalReport rep;
  rep.lambda2 = a.spectral.lambda2;
  rep.multiplicity = a.spectral.multiplicity;
  rep.spectral = a.spectral;
  rep.value = a.spectral.lambda2 + penalty_and_grad(theta, spec.omega).first;
  return rep;
}

EvalReport evaluate(const Angles& theta, const MicroclusterSummary& summary,
                    const ObjectiveSpec& spec, const SimilarityParams& params) {
  if (params.alpha == 0.0) {
    throw ConfigError("evaluate: alpha = 0 is not differentiable at zero distance");
  }
  const Assembled a = assemble(theta, summary, spec, params);
  auto [pen, pen_grad] = penalty_and_grad(theta, spec.omega);

  EvalReport rep;
  rep.lambda2 = a.spectral.lambda2;
  rep.multiplicity = a.spectral.multiplicity;
  rep.spectral = a.spectral;
  rep.value = a.spectral.lambda2 + pen;
  if (a.spectral.multiplicity != 1) {
    throw NonSimpleEigenvalue(a.spectral, rep.value);
  }

  const Matrix gP =
      dlambda_dP(spec.kind, a.spectral, summary.counts, a.degrees, a.rp.tc.T, a.rp.tc.P, params);
  const Index l = theta.dims();
  Matrix grad(theta.rows(), l);
  for (Index i = 0; i < l; ++i) {
    // 1 x K times K x d times d x (d-1)
    grad.col(i) = (gP.row(i) * a.rp.C_centered.transpose() * dV_dtheta(theta, i)).transpose();
  }
  rep.grad = grad + pen_grad;
  return rep;
}

}  // namespace scpp
