#pragma once

#include "vitalclust/cluster/params.hpp"
#include "vitalclust/features/matrix.hpp"

namespace vitalclust::cluster {

// Classic DBSCAN on the feature matrix (Euclidean).
//
// p is core iff its eps-neighborhood, self included, holds at least
// min_pts points. Clusters are the connected components of core points
// under eps-reachability, numbered by the lowest row index they contain.
// A non-core point within eps of a core point takes the label of the
// lowest-index such core; everything else is kNoiseLabel.
// When params.eps is unset it comes from the k-distance heuristic:
// the 90th percentile (linear interpolation) over patients of the
// distance to the min_pts-th nearest point, self counted at rank 1.
ClusterModel dbscan_fit(const features::FeatureMatrix& matrix,
                        const ClusterParams& params, int workers = 1);

double dbscan_default_eps(const features::FeatureMatrix& matrix, int min_pts,
                          int workers = 1);

}  // namespace vitalclust::cluster
