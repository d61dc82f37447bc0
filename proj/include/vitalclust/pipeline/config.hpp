#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vitalclust/cluster/params.hpp"

namespace vitalclust::pipeline {

enum class ValidationMode { FrozenAssign, Refit };

// The single run configuration (JSON). `seed` is mandatory — there is no
// wall-clock fallback — and unknown keys anywhere in the document are hard
// errors. Defaults below are the documented ones.
struct PipelineConfig {
  std::filesystem::path timeseries_csv;
  std::filesystem::path static_csv;
  std::filesystem::path out_dir = "out";
  int timesteps = 8;
  std::uint64_t seed = 0;
  int bootstrap_b = 1000;

  double max_abs_corr = 0.95;       // feature_selection.max_abs_corr
  std::optional<int> top_n;         // feature_selection.top_n, absent = all

  std::vector<cluster::Algorithm> algorithms = {cluster::Algorithm::KMeans};
  int k_min = 2;
  int k_max = 6;
  int n_init = 10;
  int max_iter = 300;
  double tol = 1e-6;
  std::optional<double> dbscan_eps;  // absent -> k-distance heuristic
  int dbscan_min_pts = 5;

  ValidationMode validation = ValidationMode::FrozenAssign;
  double band_multiplier = 1.0;

  cluster::ClusterParams base_params() const;
};

// Throws std::invalid_argument with a key path on unknown keys, missing
// seed, bad types, or violated invariants (k range, probabilities, paths).
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(const std::string& text, const std::string& origin);

}  // namespace vitalclust::pipeline
