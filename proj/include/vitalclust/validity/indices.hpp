#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

namespace vitalclust::validity {

// Labels are 0..k-1 (k inferred as max+1) and every index in that range
// must be non-empty. Matrices are patients x features.

// Mean of each label's members, k x d.
Eigen::MatrixXd cluster_means(const Eigen::MatrixXd& x, const std::vector<int>& labels);

// Within-cluster sum of squared Euclidean distances to the given centers.
double inertia(const Eigen::MatrixXd& x, const std::vector<int>& labels,
               const Eigen::MatrixXd& centers);

// Calinski-Harabasz: [B/(k-1)] / [W/(n-k)], higher is better.
// Throws when k < 2 or n <= k.
double chi(const Eigen::MatrixXd& x, const std::vector<int>& labels);

// Davies-Bouldin: (1/k) sum_i max_{j!=i} (S_i + S_j) / M_ij, lower is
// better. Throws when k < 2 or when two centroids coincide (names the pair).
double dbi(const Eigen::MatrixXd& x, const std::vector<int>& labels);

// Adjusted Rand index over two equal-length labelings; labels are opaque
// categories (DBSCAN noise compares as its own category). Degenerate
// contingencies (both partitions trivial) score 1.
double ari(const std::vector<int>& a, const std::vector<int>& b);

// Elbow rule: the interior k maximizing the second difference
// (I(k-1) - I(k)) - (I(k) - I(k+1)); ties to the smallest k. Keys must be
// consecutive and span at least three values.
int elbow_select_k(const std::map<int, double>& inertia_by_k);

}  // namespace vitalclust::validity
