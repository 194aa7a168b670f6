#include "scpp/driver.hpp"

#include <algorithm>
#include <cmath>

#include "scpp/numerics.hpp"
#include "scpp/projection.hpp"

namespace scpp {

void MethodConfig::finalize() {
  if (dims == 0) {
    switch (projection_mode) {
      case ProjectionMode::orthogonal: dims = 2; break;
      case ProjectionMode::correlated: dims = 3; break;
      case ProjectionMode::univariate: dims = 1; break;
    }
  }
  if (dims < 1) throw ConfigError("config: dims must be >= 1");
  if (clusters < 2) throw ConfigError("config: clusters must be >= 2");
  if (beta_start < 0.5) throw ConfigError("config: beta-start must be >= 0.5");
  if (!(sigma_multiplier > 0.0)) throw ConfigError("config: sigma-mult must be positive");
  if (method == Method::lmsc && projection_mode == ProjectionMode::correlated) {
    throw ConfigError("config: lmsc does not support the correlated mode");
  }
  if (!std::isnan(omega)) {
    if (projection_mode == ProjectionMode::orthogonal && omega <= 0.0) {
      throw ConfigError("config: orthogonal mode needs omega > 0");
    }
    if (projection_mode == ProjectionMode::correlated && omega >= 0.0) {
      throw ConfigError("config: correlated mode needs omega < 0");
    }
  }
}

double default_sigma(const MicroclusterSummary& summary, Index l) {
  const double total = summary.counts.cast<double>().sum();
  if (total < 2.0) throw DegenerateData("default_sigma: need at least 2 observations");
  const Vector n = summary.counts.cast<double>();
  const Vector cbar = summary.centers * n / total;
  const Matrix centered = summary.centers.colwise() - cbar;
  Matrix cov = Matrix::Zero(summary.centers.rows(), summary.centers.rows());
  for (Index k = 0; k < summary.size(); ++k) {
    cov += n[k] * centered.col(k) * centered.col(k).transpose();
  }
  cov /= total;
  const EigenDecomposition eig = sym_eig(SymmetricMatrix(cov));
  const double lambda_d = eig.eigenvalues[eig.eigenvalues.size() - 1];
  if (!(lambda_d > 0.0)) throw DegenerateData("default_sigma: zero variance");
  return std::sqrt(double(l) * lambda_d) * std::pow(total, -0.2);
}

namespace {

Angles pca_init(const Matrix& X, Index l) {
  const Matrix comps = pca_components(X, l);
  Matrix theta(X.rows() - 1, l);
  for (Index j = 0; j < l; ++j) {
    theta.col(j) = vector_to_angles(comps.col(j));
  }
  return Angles(theta);
}

int resolve_microclusters(const MethodConfig& cfg, Index n_sub) {
  if (cfg.microclusters > 0) {
    return static_cast<int>(std::min<Index>(cfg.microclusters, n_sub));
  }
  return default_microcluster_count(n_sub);
}

double resolve_omega(const MethodConfig& cfg, double lambda2_at_init) {
  if (!std::isnan(cfg.omega)) return cfg.omega;
  switch (cfg.projection_mode) {
    case ProjectionMode::univariate: return 0.0;
    case ProjectionMode::orthogonal: return 10.0 * lambda2_at_init;
    case ProjectionMode::correlated: return -10.0 * lambda2_at_init;
  }
  return 0.0;
}

// Sign split of the second eigenvector of the reduced Laplacian, propagated
// from microclusters to their members.
std::vector<int> extract_split(const SpectralResult& sp, const MicroclusterSummary& summary) {
  const Index K = summary.size();
  std::vector<int> side(K);
  int ones = 0;
  for (Index c = 0; c < K; ++c) {
    side[c] = sp.u[c] >= 0.0 ? 1 : 0;
    ones += side[c];
  }
  if (ones == 0 || ones == static_cast<int>(K)) {
    // numerically one-sided eigenvector: peel off the extreme cluster
    Index ext = 0;
    sp.u.cwiseAbs().maxCoeff(&ext);
    std::fill(side.begin(), side.end(), 0);
    side[ext] = 1;
  }
  std::vector<int> labels(summary.total());
  for (Index i = 0; i < summary.total(); ++i) {
    labels[i] = side[summary.source_assignments[i]];
  }
  return labels;
}

struct Attempt {
  BipartitionResult result;
  int min_side = 0;
};

Attempt attempt_split(const Matrix& subset, const MethodConfig& cfg, double beta) {
  const Index l = cfg.dims;
  Attempt at;

  if (cfg.method == Method::lmsc) {
    LmscResult lm = lmsc_projection(subset, cfg, beta);
    SimilarityParams params;
    params.sigma = lm.final_sigma;
    params.delta = lm.final_delta;
    params.beta = beta;
    const Matrix V = angles_to_matrix(lm.theta);
    const SymmetricMatrix L = reduced_standard(
        project(V, lm.final_summary.centers), lm.final_summary.counts, params);
    const SpectralResult sp = second_eigenpair(L);
    at.result.labels = extract_split(sp, lm.final_summary);
    at.result.theta_star = lm.theta;
    at.result.V = V;
    at.result.lambda2 = sp.lambda2;
    at.result.sigma_used = lm.final_sigma;
    at.result.delta_used = lm.final_delta;
  } else {
    const int K_mc = resolve_microclusters(cfg, subset.cols());
    const MicroclusterSummary summary = summarize(subset, K_mc, cfg.seed);
    const double sigma = cfg.sigma_multiplier * default_sigma(summary, l);
    SimilarityParams params;
    params.sigma = sigma;
    params.delta = std::min(0.01, sigma * sigma);
    params.beta = beta;
    const Angles theta0 = pca_init(subset, l);

    ObjectiveSpec spec{cfg.kind(), 0.0, l};
    const double lambda2_init = evaluate_value(theta0, summary, spec, params).lambda2;
    spec.omega = resolve_omega(cfg, lambda2_init);

    const OptResult opt = algorithm1(theta0, summary, spec, params, cfg.opt);
    const SymmetricMatrix L =
        cfg.kind() == LaplacianKind::standard
            ? reduced_standard(project(angles_to_matrix(opt.theta), summary.centers),
                               summary.counts, params)
            : reduced_normalized(project(angles_to_matrix(opt.theta), summary.centers),
                                 summary.counts, params);
    const SpectralResult sp = second_eigenpair(L);
    at.result.labels = extract_split(sp, summary);
    at.result.theta_star = opt.theta;
    at.result.V = angles_to_matrix(opt.theta);
    at.result.lambda2 = sp.lambda2;
    at.result.sigma_used = sigma;
    at.result.delta_used = params.delta;
  }

  at.result.beta_used = beta;
  const int ones = static_cast<int>(std::count(at.result.labels.begin(), at.result.labels.end(), 1));
  at.min_side = std::min<int>(ones, static_cast<int>(at.result.labels.size()) - ones);
  return at;
}

}  // namespace

BipartitionResult bipartition(const Matrix& subset, const MethodConfig& cfg, Index n_total) {
  if (subset.cols() < 2) throw TooSmall("bipartition: need at least 2 observations");
  if (subset.rows() < 2) throw ConfigError("bipartition: need at least 2 features");
  if (cfg.dims > subset.rows()) {
    throw ConfigError("bipartition: projection dimension exceeds data dimension");
  }
  const double balance_floor = double(n_total) / (2.0 * cfg.clusters);

  double beta = cfg.beta_start;
  while (true) {
    Attempt at = attempt_split(subset, cfg, beta);
    if (at.min_side >= balance_floor) {
      at.result.balanced = true;
      return at.result;
    }
    if (beta <= 0.5 + 1e-12) {
      // no beta met the balance rule: the unbalanced split is returned anyway
      at.result.balanced = false;
      return at.result;
    }
    beta = std::max(0.5, beta - 0.5);
  }
}

ClusterResult recursive_cluster(const Matrix& X, const MethodConfig& cfg_in) {
  MethodConfig cfg = cfg_in;
  cfg.finalize();
  const Index N = X.cols();
  if (cfg.clusters > N) throw InvalidK("recursive_cluster: more clusters than observations");

  ClusterResult out;
  out.labels.assign(N, 0);
  out.root = std::make_unique<PartitionNode>();
  out.root->member_indices.resize(N);
  for (Index i = 0; i < N; ++i) out.root->member_indices[i] = static_cast<int>(i);

  std::vector<std::vector<int>> members(1, out.root->member_indices);
  std::vector<PartitionNode*> leaves{out.root.get()};

  for (int step = 1; step < cfg.clusters; ++step) {
    // split the largest remaining cluster
    int target = 0;
    for (size_t c = 1; c < members.size(); ++c) {
      if (members[c].size() > members[target].size()) target = static_cast<int>(c);
    }
    const std::vector<int>& idx = members[target];
    Matrix sub(X.rows(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i) sub.col(i) = X.col(idx[i]);

    BipartitionResult bp = bipartition(sub, cfg, N);
    if (step == 1) out.root_projection = bp.V;
    out.splits.push_back({bp.lambda2, bp.beta_used, bp.sigma_used, sub.cols()});

    std::vector<int> left, right;
    for (size_t i = 0; i < idx.size(); ++i) {
      (bp.labels[i] == 0 ? left : right).push_back(idx[i]);
    }
    PartitionNode* node = leaves[target];
    node->theta_star = bp.theta_star.values();
    node->lambda2 = bp.lambda2;
    node->beta_used = bp.beta_used;
    node->sigma_used = bp.sigma_used;
    node->child_left = std::make_unique<PartitionNode>();
    node->child_left->member_indices = left;
    node->child_right = std::make_unique<PartitionNode>();
    node->child_right->member_indices = right;

    for (int i : right) out.labels[i] = step;
    members[target] = std::move(left);
    leaves[target] = node->child_left.get();
    members.push_back(std::move(right));
    leaves.push_back(node->child_right.get());
  }
  return out;
}

LmscResult lmsc_projection(const Matrix& subset, const MethodConfig& cfg, double beta) {
  if (subset.cols() < 2) throw TooSmall("lmsc_projection: need at least 2 observations");
  const Index l = cfg.dims;
  const int K_mc = resolve_microclusters(cfg, subset.cols());

  LmscResult out;
  out.final_summary = summarize(subset, K_mc, cfg.seed);
  const double sigma0 = cfg.sigma_multiplier * default_sigma(out.final_summary, l);
  double sigma = sigma0;
  Angles theta = pca_init(subset, l);
  Matrix V_prev;

  while (true) {
    const double delta = std::min(0.01, sigma * sigma);
    SimilarityParams params;
    params.sigma = sigma;
    params.delta = delta;
    params.beta = beta;

    ObjectiveSpec spec{LaplacianKind::standard, 0.0, l};
    if (cfg.projection_mode == ProjectionMode::orthogonal) {
      const double lambda2_init = evaluate_value(theta, out.final_summary, spec, params).lambda2;
      spec.omega = resolve_omega(cfg, lambda2_init);
    }

    const OptResult opt = algorithm1(theta, out.final_summary, spec, params, cfg.opt);
    theta = opt.theta;
    out.sigma_trace.push_back(sigma);
    out.final_sigma = sigma;
    out.final_delta = delta;

    const Matrix V = angles_to_matrix(theta);
    if (V_prev.size() > 0 && (V - V_prev).norm() <= 1e-3) break;
    V_prev = V;
    if (sigma * 0.5 < sigma0 * std::pow(2.0, -20)) break;
    sigma *= 0.5;
    out.final_summary = resummarize_projected(subset, V, K_mc, cfg.seed);
  }
  out.theta = theta;
  return out;
}

}  // namespace scpp
