#pragma once

#include <Eigen/Dense>
#include <vector>

namespace vitalclust::prognosis {

// Minimum-cost perfect assignment on a square cost matrix (rows to
// columns), by the Hungarian algorithm with potentials. Among equal-cost
// assignments the lexicographically smallest row->column mapping is
// returned (checked with a fix-and-resolve pass, tolerance `tie_tol`).
std::vector<int> hungarian(const Eigen::MatrixXd& cost, double tie_tol = 1e-9);

// Permutation p with p[other_cluster] = reference_cluster, maximizing the
// shared-patient overlap count. Labels are positionally paired; negative
// labels (noise) are ignored. Ties go to the lexicographically smallest p.
std::vector<int> align_labels_overlap(const std::vector<int>& reference,
                                      const std::vector<int>& other, int k);

// Same contract for centroid models with no shared patients: p minimizes
// the summed Euclidean distance between matched center rows.
std::vector<int> align_labels_centroids(const Eigen::MatrixXd& reference_centers,
                                        const Eigen::MatrixXd& other_centers);

// Relabels through p; negative labels pass through unchanged.
std::vector<int> apply_permutation(const std::vector<int>& labels,
                                   const std::vector<int>& p);

}  // namespace vitalclust::prognosis
