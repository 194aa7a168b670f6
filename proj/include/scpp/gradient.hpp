#pragma once

#include "scpp/microclusters.hpp"
#include "scpp/projection.hpp"
#include "scpp/similarity.hpp"
#include "scpp/spectral.hpp"

namespace scpp {

struct ObjectiveSpec {
  LaplacianKind kind = LaplacianKind::standard;
  double omega = 0.0;  // penalty weight; > 0 orthogonal, < 0 correlated
  Index dims = 1;      // l
};

struct EvalReport {
  double value = 0.0;     // lambda2 + penalty
  Matrix grad;            // (d-1) x l; empty when not computed
  double lambda2 = 0.0;
  int multiplicity = 1;
  SpectralResult spectral;
};

// d lambda2 / d P_c, an l x K matrix, for the reduced eigenproblem of the
// given kind. Composes the kernel derivative with the transform Jacobian and
// the count-weighted centering. Requires a simple lambda2. `degrees` are the
// weighted reduced-graph degrees (used by the normalized kind only).
Matrix dlambda_dP(LaplacianKind kind, const SpectralResult& spectral, const IntVector& counts,
                  const Vector& degrees, const Matrix& T, const Matrix& P_c,
                  const SimilarityParams& params);

// omega * sum_{i != j} (V_i . V_j)^2 and its gradient over the angles.
std::pair<double, Matrix> penalty_and_grad(const Angles& theta, double omega);

// Objective value, gradient and spectral data at theta. Throws
// NonSimpleEigenvalue (with payload) when lambda2 is not simple, and
// ConfigError for alpha = 0, which is excluded from gradient paths.
EvalReport evaluate(const Angles& theta, const MicroclusterSummary& summary,
                    const ObjectiveSpec& spec, const SimilarityParams& params);

// Value-only variant: never throws on multiplicity, allows alpha = 0;
// grad is left empty.
EvalReport evaluate_value(const Angles& theta, const MicroclusterSummary& summary,
                          const ObjectiveSpec& spec, const SimilarityParams& params);

namespace detail {
// Everything the reduced eigenproblem at theta is built from.
struct ReducedProblem {
  Matrix C_centered;      // count-weighted centered centers, d x K
  TransformedCenters tc;  // centered projections, intervals, transform
  Matrix S;               // kernel similarity matrix of the transformed centers
};
ReducedProblem assemble_reduced(const Angles& theta, const MicroclusterSummary& summary,
                                const SimilarityParams& params);
}  // namespace detail

}  // namespace scpp
