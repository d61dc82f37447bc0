#pragma once

#include <vector>

#include "vitalclust/cluster/params.hpp"
#include "vitalclust/core/types.hpp"
#include "vitalclust/features/matrix.hpp"

namespace vitalclust::cluster {

// Frozen-model labeling of a held-out cohort. The matrix must already be
// built with the model's catalog, column selection, and normalization
// stats; its feature names are checked against the model.
//
// KMeans: nearest centroid. KMedoids: nearest medoid. DBSCAN: label of the
// nearest core point when within eps, else kNoiseLabel. Equal distances go
// to the lowest cluster index. KShape ignores the matrix and labels raw
// grids by multivariate SBD against the stored shapes.
std::vector<std::pair<std::string, int>> assign_frozen(
    const ClusterModel& model, const features::FeatureMatrix& matrix,
    int workers = 1);

std::vector<std::pair<std::string, int>> assign_frozen_grids(
    const ClusterModel& model, const std::vector<PatientSeries>& series,
    int workers = 1);

}  // namespace vitalclust::cluster
