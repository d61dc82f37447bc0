#include "vitalclust/cluster/dbscan.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "vitalclust/core/parallel.hpp"
#include "vitalclust/features/stats.hpp"

namespace vitalclust::cluster {

namespace {

Eigen::MatrixXd pairwise(const Eigen::MatrixXd& x, int workers) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d(n, n);
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t i) {
    const auto ii = static_cast<Eigen::Index>(i);
    d(ii, ii) = 0.0;
    for (Eigen::Index j = 0; j < ii; ++j) d(ii, j) = (x.row(ii) - x.row(j)).norm();
  });
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i);
  return d;
}

}  // namespace

double dbscan_default_eps(const features::FeatureMatrix& matrix, int min_pts,
                          int workers) {
  const Eigen::Index n = matrix.rows();
  if (min_pts < 1) throw std::invalid_argument("dbscan: min_pts must be >= 1");
  if (static_cast<Eigen::Index>(min_pts) > n)
    throw std::invalid_argument("dbscan: min_pts exceeds patient count");
  const Eigen::MatrixXd d = pairwise(matrix.values, workers);
  std::vector<double> kdist(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> row(d.row(i).begin(), d.row(i).end());
    std::nth_element(row.begin(), row.begin() + (min_pts - 1), row.end());
    kdist[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(min_pts - 1)];
  }
  std::sort(kdist.begin(), kdist.end());
  return stats::quantile_sorted(kdist, 0.9);
}

ClusterModel dbscan_fit(const features::FeatureMatrix& matrix,
                        const ClusterParams& params, int workers) {
  const Eigen::Index n = matrix.rows();
  if (n < 1) throw std::invalid_argument("dbscan: empty matrix");
  const int min_pts = params.min_pts;
  if (min_pts < 1) throw std::invalid_argument("dbscan: min_pts must be >= 1");
  const double eps = params.eps ? *params.eps
                                : dbscan_default_eps(matrix, min_pts, workers);
  if (!(eps > 0.0)) throw std::invalid_argument("dbscan: eps must be > 0");

  const Eigen::MatrixXd d = pairwise(matrix.values, workers);

  std::vector<char> core(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    int count = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (d(i, j) <= eps) ++count;
    core[static_cast<std::size_t>(i)] = count >= min_pts ? 1 : 0;
  }

  // Components of core points, labeled in ascending first-row order.
  std::vector<int> labels(static_cast<std::size_t>(n), kNoiseLabel);
  int next_label = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto si = static_cast<std::size_t>(i);
    if (!core[si] || labels[si] != kNoiseLabel) continue;
    const int label = next_label++;
    std::vector<Eigen::Index> stack{i};
    labels[si] = label;
    while (!stack.empty()) {
      const Eigen::Index p = stack.back();
      stack.pop_back();
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (!core[sj] || labels[sj] != kNoiseLabel || d(p, j) > eps) continue;
        labels[sj] = label;
        stack.push_back(j);
      }
    }
  }

  // Border points: lowest-index core within eps.
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto si = static_cast<std::size_t>(i);
    if (core[si]) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (core[static_cast<std::size_t>(j)] && d(i, j) <= eps) {
        labels[si] = labels[static_cast<std::size_t>(j)];
        break;
      }
    }
  }

  ClusterModel model;
  model.algorithm = Algorithm::DBSCAN;
  model.k = next_label;
  model.seed = params.seed;
  model.eps = eps;
  model.min_pts = min_pts;
  const auto n_core = std::count(core.begin(), core.end(), 1);
  model.core_points = Eigen::MatrixXd(n_core, matrix.cols());
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto si = static_cast<std::size_t>(i);
    if (core[si]) {
      model.core_points.row(row++) = matrix.values.row(i);
      model.core_labels.push_back(labels[si]);
    }
    model.labels.emplace_back(matrix.patient_ids[si], labels[si]);
  }
  return model;
}

}  // namespace vitalclust::cluster
