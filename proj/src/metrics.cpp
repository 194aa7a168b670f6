#include "scpp/metrics.hpp"

#include <cmath>
#include <map>

namespace scpp {

namespace {

double entropy(const std::map<int, int>& counts, double total) {
  double h = 0.0;
  for (const auto& [key, c] : counts) {
    if (c > 0) {
      const double p = c / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

std::vector<int> encode(const std::vector<std::string>& truth) {
  std::map<std::string, int> ids;
  std::vector<int> out;
  out.reserve(truth.size());
  for (const auto& t : truth) {
    out.push_back(ids.emplace(t, static_cast<int>(ids.size())).first->second);
  }
  return out;
}

}  // namespace

double purity(const std::vector<int>& labels, const std::vector<std::string>& truth) {
  if (labels.size() != truth.size()) {
    throw DimensionError("purity: label/truth lengths disagree");
  }
  const std::vector<int> classes = encode(truth);
  std::map<int, std::map<int, int>> per_cluster;
  for (size_t i = 0; i < labels.size(); ++i) {
    ++per_cluster[labels[i]][classes[i]];
  }
  double hits = 0.0;
  for (const auto& [cluster, counts] : per_cluster) {
    int best = 0;
    for (const auto& [cls, c] : counts) best = std::max(best, c);
    hits += best;
  }
  return hits / double(labels.size());
}

VMeasureResult v_measure(const std::vector<int>& labels, const std::vector<std::string>& truth) {
  if (labels.size() != truth.size()) {
    throw DimensionError("v_measure: label/truth lengths disagree");
  }
  const std::vector<int> classes = encode(truth);
  const double n = double(labels.size());

  std::map<int, int> cluster_sizes, class_sizes;
  std::map<int, std::map<int, int>> class_by_cluster, cluster_by_class;
  for (size_t i = 0; i < labels.size(); ++i) {
    ++cluster_sizes[labels[i]];
    ++class_sizes[classes[i]];
    ++class_by_cluster[labels[i]][classes[i]];
    ++cluster_by_class[classes[i]][labels[i]];
  }

  const double h_class = entropy(class_sizes, n);
  const double h_cluster = entropy(cluster_sizes, n);

  double h_class_given_cluster = 0.0;
  for (const auto& [cluster, counts] : class_by_cluster) {
    h_class_given_cluster += (cluster_sizes[cluster] / n) * entropy(counts, cluster_sizes[cluster]);
  }
  double h_cluster_given_class = 0.0;
  for (const auto& [cls, counts] : cluster_by_class) {
    h_cluster_given_class += (class_sizes[cls] / n) * entropy(counts, class_sizes[cls]);
  }

  VMeasureResult r;
  r.homogeneity = h_class == 0.0 ? 1.0 : 1.0 - h_class_given_cluster / h_class;
  r.completeness = h_cluster == 0.0 ? 1.0 : 1.0 - h_cluster_given_class / h_cluster;
  const double denom = r.homogeneity + r.completeness;
  r.v = denom <= 0.0 ? 0.0 : 2.0 * r.homogeneity * r.completeness / denom;
  return r;
}

}  // namespace scpp
