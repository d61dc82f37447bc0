#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vitalclust/core/types.hpp"
#include "vitalclust/features/matrix.hpp"

namespace vitalclust::cluster {

enum class Algorithm { KMeans, KMedoids, KShape, DBSCAN };

inline constexpr int kNoiseLabel = -1;

std::string_view algorithm_name(Algorithm a);  // kmeans/kmedoids/kshape/dbscan
std::optional<Algorithm> algorithm_from_name(std::string_view name);

struct ClusterParams {
  Algorithm algorithm = Algorithm::KMeans;
  int k = 3;
  std::uint64_t seed = 0;
  int max_iter = 300;
  double tol = 1e-6;  // relative inertia change
  int n_init = 10;    // restarts; best objective wins
  std::optional<double> eps;  // DBSCAN; unset -> k-distance heuristic
  int min_pts = 5;
};

// Fitted artifact. Only the fields of the fitted algorithm are populated;
// labels use kNoiseLabel for DBSCAN noise.
struct ClusterModel {
  Algorithm algorithm = Algorithm::KMeans;
  int k = 0;  // discovered cluster count for DBSCAN
  std::uint64_t seed = 0;

  std::vector<std::string> selected_features;
  std::vector<features::ColumnStat> normalization;  // frozen stats, per selected feature

  Eigen::MatrixXd centers;              // KMeans: k x d
  std::vector<std::string> medoid_ids;  // KMedoids
  Eigen::MatrixXd medoids;              // KMedoids: k x d
  std::vector<VitalGrid> shapes;        // KShape: k grids of 5 x T
  Eigen::MatrixXd core_points;          // DBSCAN: cores x d, ascending index
  std::vector<int> core_labels;         // cluster of each core point
  double eps = 0;
  int min_pts = 0;

  std::vector<std::pair<std::string, int>> labels;  // cohort order

  // Diagnostics of the winning fit.
  double inertia = 0;
  std::vector<double> inertia_trace;  // per Lloyd/refinement iteration
  std::vector<double> swap_cost_trace;  // PAM cost after each accepted swap

  std::unordered_map<std::string, int> label_map() const {
    std::unordered_map<std::string, int> m;
    m.reserve(labels.size());
    for (const auto& [id, l] : labels) m.emplace(id, l);
    return m;
  }

  std::vector<int> label_values() const {
    std::vector<int> v;
    v.reserve(labels.size());
    for (const auto& [id, l] : labels) v.push_back(l);
    return v;
  }
};

}  // namespace vitalclust::cluster
