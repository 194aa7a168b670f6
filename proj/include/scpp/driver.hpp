#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "scpp/microclusters.hpp"
#include "scpp/optimizer.hpp"

namespace scpp {

enum class Method { scpp, scnpp, lmsc };
enum class ProjectionMode { orthogonal, correlated, univariate };

struct MethodConfig {
  Method method = Method::scpp;
  ProjectionMode projection_mode = ProjectionMode::orthogonal;
  Index dims = 0;             // 0 = per-mode default (2 / 3 / 1)
  int clusters = 2;           // K_target
  double beta_start = 3.0;
  double sigma_multiplier = 1.0;
  std::uint64_t seed = 1;
  int microclusters = 0;      // 0 = auto
  double omega = std::numeric_limits<double>::quiet_NaN();  // NaN = auto magnitude
  OptimizerOptions opt;

  LaplacianKind kind() const {
    return method == Method::scnpp ? LaplacianKind::normalized : LaplacianKind::standard;
  }
  // Fills mode-derived defaults and validates; throws ConfigError.
  void finalize();
};

struct PartitionNode {
  std::vector<int> member_indices;
  std::unique_ptr<PartitionNode> child_left;
  std::unique_ptr<PartitionNode> child_right;
  Matrix theta_star;  // empty for leaves
  double lambda2 = 0.0;
  double beta_used = 0.0;
  double sigma_used = 0.0;
};

// sqrt(l * lambda_d) * N^{-1/5} with lambda_d the largest count-weighted
// covariance eigenvalue of the summarized (sub)set. Throws DegenerateData on
// zero variance.
double default_sigma(const MicroclusterSummary& summary, Index l);

struct BipartitionResult {
  std::vector<int> labels;  // 0/1 per subset column
  Angles theta_star;
  Matrix V;                 // projection matrix at theta_star
  double lambda2 = 0.0;
  double beta_used = 0.0;
  double sigma_used = 0.0;
  double delta_used = 0.0;
  bool balanced = true;     // whether the accepted beta met the balance rule
};

// One split of a subset: runs the beta schedule (beta_start down by 0.5 to
// 0.5), optimizing theta at each beta from the PCA initialization, and
// accepts the largest beta whose split has min side >= n_total/(2 K_target);
// the beta = 0.5 split is returned regardless when none qualifies.
BipartitionResult bipartition(const Matrix& subset, const MethodConfig& cfg, Index n_total);

struct SplitRecord {
  double lambda2 = 0.0;
  double beta_used = 0.0;
  double sigma_used = 0.0;
  Index subset_size = 0;
};

struct ClusterResult {
  std::vector<int> labels;  // in {0, ..., K_target-1}
  std::vector<SplitRecord> splits;
  Matrix root_projection;   // V of the first split (for plotting)
  std::unique_ptr<PartitionNode> root;
};

// K_target - 1 bipartitions, always splitting the largest remaining cluster;
// sigma, beta, delta and the initialization are recomputed per split.
ClusterResult recursive_cluster(const Matrix& X, const MethodConfig& cfg);

struct LmscResult {
  Angles theta;
  std::vector<double> sigma_trace;   // sigma used by each optimization stage
  MicroclusterSummary final_summary;
  double final_sigma = 0.0;
  double final_delta = 0.0;
};

// sigma-annealing loop: optimize at the current sigma (standard Laplacian),
// halve sigma, set delta = min(0.01, sigma^2), recluster in the projected
// space; stops when the projection matrix moves by <= 1e-3 in Frobenius norm
// or sigma falls below sigma0 * 2^-20.
LmscResult lmsc_projection(const Matrix& subset, const MethodConfig& cfg, double beta);

}  // namespace scpp
