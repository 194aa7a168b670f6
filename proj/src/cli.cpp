#include "scpp/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "scpp/dataset.hpp"
#include "scpp/driver.hpp"
#include "scpp/metrics.hpp"
#include "scpp/projection.hpp"

namespace scpp {

namespace {

Method parse_method(const std::string& s) {
  if (s == "scpp") return Method::scpp;
  if (s == "scnpp") return Method::scnpp;
  if (s == "lmsc") return Method::lmsc;
  throw ConfigError("unknown method: " + s);
}

ProjectionMode parse_mode(const std::string& s) {
  if (s == "orthogonal") return ProjectionMode::orthogonal;
  if (s == "correlated") return ProjectionMode::correlated;
  if (s == "univariate") return ProjectionMode::univariate;
  throw ConfigError("unknown projection mode: " + s);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Spectral connectivity projection pursuit clustering"};
  app.name("cluster");

  std::string input, label_col, out_dir = ".";
  std::string method_s = "scpp", proj_s = "orthogonal";
  int clusters = 2, dims = 0, microclusters = 0;
  double omega = std::numeric_limits<double>::quiet_NaN();
  double beta_start = 3.0, sigma_mult = 1.0;
  std::uint64_t seed = 1;
  bool emit_projection = false;

  app.add_option("--input", input, "input CSV (comma-delimited, optional header)")->required();
  app.add_option("--label-col", label_col, "class column, by header name or 0-based index");
  app.add_option("--clusters", clusters, "number of clusters K");
  app.add_option("--method", method_s, "scpp | scnpp | lmsc");
  app.add_option("--proj", proj_s, "orthogonal | correlated | univariate");
  app.add_option("--dims", dims, "projection dimension (default per mode: 2/3/1)");
  app.add_option("--omega", omega, "penalty weight (default 10*lambda2 at init, sign per mode)");
  app.add_option("--beta-start", beta_start, "initial constraint width");
  app.add_option("--sigma-mult", sigma_mult, "multiplier on the sigma heuristic");
  app.add_option("--microclusters", microclusters, "microcluster count (default auto)");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_flag("--emit-projection", emit_projection, "write projected coordinates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help() << std::endl;
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 3;
  }

  MethodConfig cfg;
  LabeledDataset ds;
  try {
    cfg.method = parse_method(method_s);
    cfg.projection_mode = parse_mode(proj_s);
    cfg.dims = dims;
    cfg.clusters = clusters;
    cfg.beta_start = beta_start;
    cfg.sigma_multiplier = sigma_mult;
    cfg.seed = seed;
    cfg.microclusters = microclusters;
    cfg.omega = omega;
    cfg.finalize();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 3;
  }

  try {
    ds = load_and_standardize(input, label_col);
  } catch (const IngestError& e) {
    std::cerr << "ingest error: " << e.what() << std::endl;
    return 2;
  } catch (const DegenerateData& e) {
    std::cerr << "ingest error: " << e.what() << std::endl;
    return 2;
  }
  if (ds.dropped_rows > 0) {
    std::cerr << "dropped " << ds.dropped_rows << " rows with missing cells" << std::endl;
  }
  for (const auto& f : ds.dropped_features) {
    std::cerr << "dropped zero-variance feature: " << f << std::endl;
  }

  ClusterResult result;
  try {
    if (cfg.dims > ds.data.rows()) {
      throw ConfigError("projection dimension exceeds the number of features");
    }
    result = recursive_cluster(ds.data, cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 3;
  } catch (const InvalidK& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 3;
  }

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ofstream f(fs::path(out_dir) / "labels.csv");
    f << "index,label\n";
    for (size_t i = 0; i < result.labels.size(); ++i) {
      f << i << "," << result.labels[i] << "\n";
    }
  }

  nlohmann::json metrics;
  if (!ds.truth.empty()) {
    const VMeasureResult vm = v_measure(result.labels, ds.truth);
    metrics["purity"] = purity(result.labels, ds.truth);
    metrics["v_measure"] = vm.v;
    metrics["homogeneity"] = vm.homogeneity;
    metrics["completeness"] = vm.completeness;
  } else {
    metrics["purity"] = nullptr;
    metrics["v_measure"] = nullptr;
    metrics["homogeneity"] = nullptr;
    metrics["completeness"] = nullptr;
  }
  metrics["per_split"] = nlohmann::json::array();
  for (const auto& s : result.splits) {
    metrics["per_split"].push_back({{"lambda2", s.lambda2},
                                    {"beta_used", s.beta_used},
                                    {"sigma_used", s.sigma_used},
                                    {"subset_size", s.subset_size}});
  }
  {
    std::ofstream f(fs::path(out_dir) / "metrics.json");
    f << metrics.dump(2) << "\n";
  }

  if (emit_projection) {
    const Matrix P = project(result.root_projection, ds.data);
    std::ofstream f(fs::path(out_dir) / "projection.csv");
    f << "index";
    for (Index k = 0; k < P.rows(); ++k) f << ",p" << (k + 1);
    f << ",label\n";
    f.precision(12);
    for (Index i = 0; i < P.cols(); ++i) {
      f << i;
      for (Index k = 0; k < P.rows(); ++k) f << "," << P(k, i);
      f << "," << result.labels[i] << "\n";
    }
  }

  if (!ds.truth.empty()) {
    std::cout << "purity " << metrics["purity"].get<double>() << "  v-measure "
              << metrics["v_measure"].get<double>() << std::endl;
  } else {
    std::cout << "clustered " << result.labels.size() << " observations into " << cfg.clusters
              << " clusters" << std::endl;
  }
  return 0;
}

}  // namespace scpp
