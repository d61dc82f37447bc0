#pragma once

#include "vitalclust/cluster/params.hpp"

namespace vitalclust::cluster {

/// Lloyd's algorithm with k-means++ seeding over n_init restarts (restart
/// r is seeded with hash64(seed, r)); the lowest-inertia restart wins,
/// ties to the lower restart index. Candidate sampling is keyed to patient
/// ids, so permuting the input rows permutes the labels without changing
/// the clustering. Empty clusters are repaired by reseeding them with the
/// point farthest from its assigned centroid. Requires 1 <= k <= n.
ClusterModel kmeans_fit(const features::FeatureMatrix& matrix,
                        const ClusterParams& params, int workers = 1);

}  // namespace vitalclust::cluster
