#pragma once

#include <functional>
#include <vector>

#include "scpp/gradient.hpp"

namespace scpp {

struct OptimizerOptions {
  int max_iters = 500;
  double grad_tol = 1e-6;        // relative: ||g||_inf <= grad_tol * max(1, |f|)
  double step_init = 1.0;
  double backtrack_factor = 0.5;
  double armijo_c = 1e-4;
  int nonsmooth_line_search_points = 30;
  int outer_iters = 30;          // algorithm1 outer-loop cap
};

enum class OptStatus {
  converged,   // gradient tolerance met
  stalled,     // no Armijo step found
  max_iters,
  non_simple,  // lambda2 coalesced at the current iterate
};

struct OptResult {
  Angles theta;
  EvalReport report;  // at theta; grad empty when status == non_simple
  OptStatus status = OptStatus::converged;
  std::vector<double> values;  // accepted objective values, nonincreasing
};

using Objective = std::function<EvalReport(const Angles&)>;

// Steepest descent with Armijo backtracking. Candidates are wrapped into
// [0, pi) before evaluation, so the acceptance test sees the true value of
// the next iterate and monotonicity holds by construction.
OptResult minimize_smooth(const Objective& objective, const Angles& theta0,
                          const OptimizerOptions& opts);

// Entrywise derivative of the reduced Laplacian with respect to angle (i, j)
// (row i of theta, projection dimension j).
SymmetricMatrix dL_dtheta_ij(const Angles& theta, Index i, Index j,
                             const MicroclusterSummary& summary, const SimilarityParams& params,
                             LaplacianKind kind);

// Directional derivative of lambda2 at a coalescent point: the smallest
// eigenvalue of sum_ij direction(i,j) Q^T L_ij Q.
double nonsmooth_directional(const Matrix& direction, const Matrix& Q,
                             const std::vector<std::vector<SymmetricMatrix>>& L_ij);

// Smooth descent alternating with coordinate nonsmooth escape steps at
// eigenvalue coalescence; lambda2 is nonincreasing across outer iterations.
OptResult algorithm1(const Angles& theta0, const MicroclusterSummary& summary,
                     const ObjectiveSpec& spec, const SimilarityParams& params,
                     const OptimizerOptions& opts);

}  // namespace scpp
