#include "scpp/optimizer.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "scpp/numerics.hpp"

namespace scpp {

namespace {

constexpr double kPi = 3.14159265358979323846;

Angles wrap_all(const Matrix& raw) { return Angles(raw); }

}  // namespace

OptResult minimize_smooth(const Objective& objective, const Angles& theta0,
                          const OptimizerOptions& opts) {
  Angles theta = theta0;
  EvalReport rep;
  try {
    rep = objective(theta);
  } catch (const NonSimpleEigenvalue& e) {
    EvalReport partial;
    partial.value = e.value;
    partial.lambda2 = e.spectral.lambda2;
    partial.multiplicity = e.spectral.multiplicity;
    partial.spectral = e.spectral;
    return {theta, partial, OptStatus::non_simple, {e.value}};
  }

  OptResult out{theta, rep, OptStatus::max_iters, {rep.value}};
  double bb_step = opts.step_init;
  double last_accepted = opts.step_init;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    const Matrix g = out.report.grad;
    const double gnorm_inf = g.cwiseAbs().maxCoeff();
    // relative to the objective scale: the annealed lambda2 regime has both
    // values and gradients shrinking multiplicatively
    if (gnorm_inf <= opts.grad_tol * std::max(std::abs(out.report.value), 1e-8)) {
      out.status = OptStatus::converged;
      return out;
    }
    const double g2 = g.squaredNorm();

    // Barzilai-Borwein initial step, grown at most 4x past the last accepted
    // step and capped so a trial never jumps further than pi in any
    // coordinate; a fixed unit step freezes once the annealed objective (and
    // with it the gradient) decays exponentially, while raw BB overshoots on
    // nonconvex stretches and burns evaluations backtracking
    double step = std::min({bb_step, 4.0 * last_accepted, kPi / gnorm_inf});
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Angles cand = wrap_all(out.theta.values() - step * g);
      EvalReport cand_rep;
      try {
        cand_rep = objective(cand);
      } catch (const NonSimpleEigenvalue& e) {
        if (e.value <= out.report.value - opts.armijo_c * step * g2) {
          // a coalescent point that strictly improves: hand it to the
          // nonsmooth machinery
          EvalReport partial;
          partial.value = e.value;
          partial.lambda2 = e.spectral.lambda2;
          partial.multiplicity = e.spectral.multiplicity;
          partial.spectral = e.spectral;
          out.theta = cand;
          out.report = partial;
          out.values.push_back(e.value);
          out.status = OptStatus::non_simple;
          return out;
        }
        step *= opts.backtrack_factor;
        continue;
      }
      if (cand_rep.value <= out.report.value - opts.armijo_c * step * g2) {
        const Matrix s_step = cand.values() - out.theta.values();
        const Matrix y_step = cand_rep.grad - g;
        const double sy = (s_step.array() * y_step.array()).sum();
        const double ss = s_step.squaredNorm();
        bb_step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : 2.0 * step;
        last_accepted = step;
        out.theta = cand;
        out.report = cand_rep;
        out.values.push_back(cand_rep.value);
        accepted = true;
        break;
      }
      step *= opts.backtrack_factor;
    }
    if (!accepted) {
      out.status = OptStatus::stalled;
      return out;
    }
  }
  return out;
}

SymmetricMatrix dL_dtheta_ij(const Angles& theta, Index i, Index j,
                             const MicroclusterSummary& summary, const SimilarityParams& params,
                             LaplacianKind kind) {
  const detail::ReducedProblem a = detail::assemble_reduced(theta, summary, params);
  const Index K = a.S.rows();
  const Vector n = summary.counts.cast<double>();
  const double sigma = params.sigma;

  // dP(j, m) / dtheta(i, j): only row j of P moves with column j of theta
  const Vector dP = (a.C_centered.transpose() * dV_dtheta(theta, j).col(i));
  const Matrix Dt = transform_deriv_matrix(a.tc.P, summary.counts, params.beta, params.delta, j);
  const Vector dT = Dt * dP;

  // entrywise similarity derivative
  Matrix dS = Matrix::Zero(K, K);
  for (Index p = 0; p < K; ++p) {
    for (Index q = p + 1; q < K; ++q) {
      const double dist = (a.tc.T.col(p) - a.tc.T.col(q)).norm();
      if (dist < 1e-14) continue;
      const double kd = kernel_deriv(dist / sigma, params.alpha) / (sigma * dist);
      const double ds = kd * (a.tc.T(j, p) - a.tc.T(j, q)) * (dT[p] - dT[q]);
      dS(p, q) = ds;
      dS(q, p) = ds;
    }
  }

  if (kind == LaplacianKind::standard) {
    Matrix dL(K, K);
    for (Index p = 0; p < K; ++p) {
      double ddeg = 0.0;
      for (Index q = 0; q < K; ++q) ddeg += n[q] * dS(p, q);
      for (Index q = 0; q < K; ++q) {
        dL(p, q) = -std::sqrt(n[p] * n[q]) * dS(p, q);
      }
      dL(p, p) += ddeg;
    }
    return SymmetricMatrix(dL);
  }

  // normalized: L = I - D^{-1/2} A D^{-1/2} with A = n_p n_q s(p,q)
  Vector deg(K), ddeg(K);
  for (Index p = 0; p < K; ++p) {
    double acc = 0.0, dacc = 0.0;
    for (Index q = 0; q < K; ++q) {
      acc += n[p] * n[q] * a.S(p, q);
      dacc += n[p] * n[q] * dS(p, q);
    }
    deg[p] = acc;
    ddeg[p] = dacc;
  }
  Matrix dL(K, K);
  for (Index p = 0; p < K; ++p) {
    for (Index q = 0; q < K; ++q) {
      const double A = n[p] * n[q] * a.S(p, q);
      const double dA = n[p] * n[q] * dS(p, q);
      const double scale = 1.0 / std::sqrt(deg[p] * deg[q]);
      dL(p, q) = -dA * scale + A * scale * (ddeg[p] / (2.0 * deg[p]) + ddeg[q] / (2.0 * deg[q]));
    }
  }
  return SymmetricMatrix(dL);
}

double nonsmooth_directional(const Matrix& direction, const Matrix& Q,
                             const std::vector<std::vector<SymmetricMatrix>>& L_ij) {
  const Index t = Q.cols();
  Matrix pencil = Matrix::Zero(t, t);
  for (size_t i = 0; i < L_ij.size(); ++i) {
    for (size_t j = 0; j < L_ij[i].size(); ++j) {
      const double w = direction(static_cast<Index>(i), static_cast<Index>(j));
      if (w == 0.0) continue;
      pencil += w * (Q.transpose() * L_ij[i][j].entries() * Q);
    }
  }
  return sym_eig(SymmetricMatrix(pencil)).eigenvalues[0];
}

namespace {

struct PencilInfo {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool max_simple = false;
  bool min_simple = false;
  double frob = 0.0;
};

// Golden-section scan of lambda2(theta + sign*gamma*e_ij) over (0, pi].
// Returns the best gamma whose evaluation is feasible (simple lambda2 when
// require_simple) and strictly below `current`.
std::optional<std::pair<double, double>> coordinate_line_search(
    const Angles& theta, Index i, Index j, double sign, const MicroclusterSummary& summary,
    const ObjectiveSpec& spec, const SimilarityParams& params, int budget, bool require_simple,
    double current) {
  auto probe = [&](double gamma) -> std::pair<double, bool> {
    Matrix cand = theta.values();
    cand(i, j) += sign * gamma;
    const EvalReport rep = evaluate_value(Angles(cand), summary, spec, params);
    const bool feasible = !require_simple || rep.multiplicity == 1;
    return {rep.lambda2, feasible};
  };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = kPi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  auto [f1, ok1] = probe(x1);
  auto [f2, ok2] = probe(x2);

  double best_gamma = 0.0;
  double best_val = current;
  bool found = false;
  auto consider = [&](double gamma, double val, bool ok) {
    if (ok && val < best_val) {
      best_val = val;
      best_gamma = gamma;
      found = true;
    }
  };
  consider(x1, f1, ok1);
  consider(x2, f2, ok2);

  for (int it = 2; it < budget; ++it) {
    const double c1 = ok1 ? f1 : std::numeric_limits<double>::infinity();
    const double c2 = ok2 ? f2 : std::numeric_limits<double>::infinity();
    if (c1 <= c2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      ok2 = ok1;
      x1 = b - inv_phi * (b - a);
      std::tie(f1, ok1) = probe(x1);
      consider(x1, f1, ok1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      ok1 = ok2;
      x2 = a + inv_phi * (b - a);
      std::tie(f2, ok2) = probe(x2);
      consider(x2, f2, ok2);
    }
  }
  if (!found) return std::nullopt;
  return std::make_pair(best_gamma, best_val);
}

}  // namespace

OptResult algorithm1(const Angles& theta0, const MicroclusterSummary& summary,
                     const ObjectiveSpec& spec, const SimilarityParams& params,
                     const OptimizerOptions& opts) {
  const Objective objective = [&](const Angles& th) {
    return evaluate(th, summary, spec, params);
  };
  const Index rows = theta0.rows();
  const Index cols = theta0.dims();

  OptResult out{theta0, EvalReport{}, OptStatus::max_iters, {}};
  Angles theta = theta0;

  for (int outer = 0; outer < opts.outer_iters; ++outer) {
    OptResult smooth = minimize_smooth(objective, theta, opts);
    theta = smooth.theta;
    out.theta = theta;
    out.report = smooth.report;
    out.values.insert(out.values.end(), smooth.values.begin(), smooth.values.end());
    if (smooth.status != OptStatus::non_simple) {
      out.status = smooth.status;
      return out;
    }

    // Coalescence: loop on coordinate escape steps until lambda2 decouples.
    bool decoupled = false;
    for (int inner = 0; inner < 10 && !decoupled; ++inner) {
      const EvalReport here = evaluate_value(theta, summary, spec, params);
      out.report = here;
      out.theta = theta;
      if (here.multiplicity == 1) {
        decoupled = true;
        break;
      }
      const Matrix& Q = here.spectral.Q;

      std::vector<std::vector<SymmetricMatrix>> L_ij;
      std::vector<std::vector<PencilInfo>> pencils(rows);
      bool all_zero = true;
      L_ij.reserve(rows);
      for (Index i = 0; i < rows; ++i) {
        std::vector<SymmetricMatrix> row_mats;
        row_mats.reserve(cols);
        for (Index j = 0; j < cols; ++j) {
          SymmetricMatrix Lij = dL_dtheta_ij(theta, i, j, summary, params, spec.kind);
          const SymmetricMatrix pencil(Q.transpose() * Lij.entries() * Q);
          const double lf = Lij.entries().norm();
          if (pencil.entries().norm() > 1e-10 * std::max(1.0, lf)) all_zero = false;

          const EigenDecomposition pe = sym_eig(pencil);
          PencilInfo info;
          const Index t = pe.eigenvalues.size();
          info.lambda_min = pe.eigenvalues[0];
          info.lambda_max = pe.eigenvalues[t - 1];
          const double ptol = std::max(1e-8 * pe.eigenvalues.cwiseAbs().maxCoeff(),
                                       1e-12 * std::max(1.0, lf));
          info.min_simple = t < 2 || (pe.eigenvalues[1] - pe.eigenvalues[0]) > ptol;
          info.max_simple = t < 2 || (pe.eigenvalues[t - 1] - pe.eigenvalues[t - 2]) > ptol;
          info.frob = pencil.entries().norm();
          pencils[i].push_back(info);
          row_mats.push_back(std::move(Lij));
        }
        L_ij.push_back(std::move(row_mats));
      }
      if (all_zero) {
        out.status = OptStatus::converged;
        return out;
      }

      // steps 6-7: prefer a coordinate whose extreme pencil eigenvalue is
      // simple (the step provably decouples lambda2 for small gamma)
      double best = 0.0;
      Index bi = -1, bj = -1;
      double sign = 0.0;
      bool constrained = false;
      for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
          const PencilInfo& p = pencils[i][j];
          if (p.lambda_max > best && p.max_simple) {
            best = p.lambda_max;
            bi = i;
            bj = j;
            sign = -1.0;
            constrained = true;
          }
          if (-p.lambda_min > best && p.min_simple) {
            best = -p.lambda_min;
            bi = i;
            bj = j;
            sign = +1.0;
            constrained = true;
          }
        }
      }
      if (bi < 0) {
        // steps 8-10: argmax of max{lambda_t, -lambda_1} without the
        // simplicity side constraint
        for (Index i = 0; i < rows; ++i) {
          for (Index j = 0; j < cols; ++j) {
            const PencilInfo& p = pencils[i][j];
            if (p.lambda_max > best) {
              best = p.lambda_max;
              bi = i;
              bj = j;
              sign = -1.0;
            }
            if (-p.lambda_min > best) {
              best = -p.lambda_min;
              bi = i;
              bj = j;
              sign = +1.0;
            }
          }
        }
        constrained = false;
      }
      if (bi < 0) {
        out.status = OptStatus::converged;
        return out;
      }

      const auto step = coordinate_line_search(theta, bi, bj, sign, summary, spec, params,
                                               opts.nonsmooth_line_search_points, constrained,
                                               here.lambda2);
      if (!step) {
        // the chosen descent coordinate produced no strict decrease: reject
        // and terminate
        out.status = OptStatus::stalled;
        return out;
      }
      Matrix next = theta.values();
      next(bi, bj) += sign * step->first;
      theta = Angles(next);
    }
  }
  return out;
}

}  // namespace scpp
