#pragma once

#include <vector>

#include "vitalclust/cluster/params.hpp"
#include "vitalclust/core/types.hpp"

namespace vitalclust::cluster {

// k-Shape over raw 5 x T grids (channels z-normed per patient), not the
// feature matrix. Distance is the multivariate SBD: 1 minus the best mean
// per-channel NCC at one shared shift.
//
// Each restart r (seed hash64(seed, r)) starts from labels derived from the
// patient ids alone, so permuting input rows permutes nothing but row order.
// Iterations alternate shape refinement (per cluster per channel, dominant
// eigenvector of the centered alignment matrix via power iteration,
// tol 1e-8 / 100 steps, sign matched to the mean aligned member) and
// reassignment, until labels are stable or max_iter. Lowest total distance
// across restarts wins, ties to the lower restart index.
ClusterModel kshape_fit(const std::vector<PatientSeries>& series,
                        const ClusterParams& params, int workers = 1);

// Dominant eigenvector of the centered alignment matrix S = Q M Q,
// Q = I - (1/T)*11^T, by power iteration from a fixed hash-seeded start
// vector. Returns the zero vector when S is (numerically) zero.
Eigen::VectorXd dominant_eigenvector(const Eigen::MatrixXd& s,
                                     double tol = 1e-8, int max_iter = 100);

}  // namespace vitalclust::cluster
