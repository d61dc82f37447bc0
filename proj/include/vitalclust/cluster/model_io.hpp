#pragma once

#include <string>

#include "vitalclust/cluster/params.hpp"

namespace vitalclust::cluster {

// Single-document JSON serialization of a fitted model: algorithm, k,
// seed, selected feature names, frozen normalization stats, the fitted
// geometry (centers / medoids / shapes / core points), diagnostics, and
// the labels. Round-trips exactly (doubles emitted shortest-round-trip).
std::string model_to_json(const ClusterModel& model);
ClusterModel model_from_json(const std::string& text);

void write_model_json(const std::string& path, const ClusterModel& model);
ClusterModel read_model_json(const std::string& path);

// `patient_id,cluster` in label order.
void write_labels_csv(const std::string& path,
                      const std::vector<std::pair<std::string, int>>& labels);
std::vector<std::pair<std::string, int>> read_labels_csv(const std::string& path);

}  // namespace vitalclust::cluster
