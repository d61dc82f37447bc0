#include "vitalclust/cluster/assign.hpp"

#include <limits>
#include <stdexcept>

#include "vitalclust/cluster/sbd.hpp"
#include "vitalclust/core/parallel.hpp"

namespace vitalclust::cluster {

namespace {

// Row index of the nearest reference row, ties to the lower index.
int nearest_row(const Eigen::RowVectorXd& x, const Eigen::MatrixXd& refs) {
  int best = 0;
  double best_d = (x - refs.row(0)).squaredNorm();
  for (Eigen::Index r = 1; r < refs.rows(); ++r) {
    const double d = (x - refs.row(r)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(r);
    }
  }
  return best;
}

}  // namespace

std::vector<std::pair<std::string, int>> assign_frozen(
    const ClusterModel& model, const features::FeatureMatrix& matrix,
    int workers) {
  if (model.algorithm == Algorithm::KShape)
    throw std::invalid_argument("assign_frozen: kshape models take grids");
  if (!model.selected_features.empty() &&
      matrix.feature_names != model.selected_features)
    throw std::invalid_argument("assign_frozen: feature names do not match the model");

  const Eigen::Index n = matrix.rows();
  std::vector<int> out(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t i) {
    const Eigen::RowVectorXd x = matrix.values.row(static_cast<Eigen::Index>(i));
    switch (model.algorithm) {
      case Algorithm::KMeans:
        out[i] = nearest_row(x, model.centers);
        break;
      case Algorithm::KMedoids:
        out[i] = nearest_row(x, model.medoids);
        break;
      case Algorithm::DBSCAN: {
        int label = kNoiseLabel;
        double best_d = std::numeric_limits<double>::infinity();
        for (Eigen::Index r = 0; r < model.core_points.rows(); ++r) {
          const double d = (x - model.core_points.row(r)).norm();
          const int cand = model.core_labels[static_cast<std::size_t>(r)];
          if (d < best_d || (d == best_d && label != kNoiseLabel && cand < label)) {
            best_d = d;
            label = cand;
          }
        }
        out[i] = best_d <= model.eps ? label : kNoiseLabel;
        break;
      }
      case Algorithm::KShape:
        break;  // unreachable, rejected above
    }
  });

  std::vector<std::pair<std::string, int>> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    labels.emplace_back(matrix.patient_ids[static_cast<std::size_t>(i)],
                        out[static_cast<std::size_t>(i)]);
  return labels;
}

std::vector<std::pair<std::string, int>> assign_frozen_grids(
    const ClusterModel& model, const std::vector<PatientSeries>& series,
    int workers) {
  if (model.algorithm != Algorithm::KShape)
    throw std::invalid_argument("assign_frozen_grids: model is not kshape");
  if (model.shapes.empty()) throw std::invalid_argument("assign_frozen_grids: no shapes");

  std::vector<int> out(series.size());
  parallel_for(series.size(), workers, [&](std::size_t i) {
    const VitalGrid zg = znorm_grid(series[i].grid);
    int best = 0;
    double best_d = multivariate_sbd(zg, model.shapes[0]);
    for (std::size_t c = 1; c < model.shapes.size(); ++c) {
      const double d = multivariate_sbd(zg, model.shapes[c]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    out[i] = best;
  });

  std::vector<std::pair<std::string, int>> labels;
  labels.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i)
    labels.emplace_back(series[i].patient_id, out[i]);
  return labels;
}

}  // namespace vitalclust::cluster
