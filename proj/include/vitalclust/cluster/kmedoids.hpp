#pragma once

#include "vitalclust/cluster/params.hpp"
#include "vitalclust/features/matrix.hpp"

namespace vitalclust::cluster {

// PAM in feature space with Euclidean (unsquared) distances.
//
// BUILD picks the point minimising total distance first, then greedily adds
// the medoid with the largest cost reduction. SWAP evaluates every
// (medoid, non-medoid) exchange and applies the single best-improving swap
// until no swap lowers the cost. Ties at every stage resolve to the smaller
// patient id, so the fit is deterministic and independent of row order.
// `seed` is recorded in the model but never consulted.
ClusterModel kmedoids_fit(const features::FeatureMatrix& matrix,
                          const ClusterParams& params, int workers = 1);

}  // namespace vitalclust::cluster
