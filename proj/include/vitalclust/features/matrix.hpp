#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vitalclust::features {

struct ColumnStat {
  double mean = 0;
  double std = 0;
};

struct FeatureMatrix {
  std::vector<std::string> patient_ids;    // row order
  std::vector<std::string> feature_names;  // column order
  Eigen::MatrixXd values;                  // patients x features
  // Per-column (mean, std) recorded by normalize_features; applied frozen
  // to validation data later.
  std::optional<std::vector<ColumnStat>> column_stats;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
  std::optional<Eigen::Index> column_index(const std::string& name) const;
};

struct DroppedColumn {
  std::string name;
  std::string reason;  // "non-finite" or "zero variance"
};

/// Drops columns containing any non-finite entry, then columns whose
/// population std across patients is below the variance floor.
FeatureMatrix clean_features(const FeatureMatrix& m,
                             std::vector<DroppedColumn>* dropped = nullptr);

/// Column-wise z-normalization; the per-column (mean, std) is recorded in
/// column_stats of the result.
FeatureMatrix normalize_features(const FeatureMatrix& m);

/// Applies previously recorded stats to new rows: (x - mean) / std per
/// column, zero when the recorded std is below the variance floor. Column
/// selection is by name; missing columns are an error.
FeatureMatrix apply_normalization(const FeatureMatrix& raw,
                                  const std::vector<std::string>& feature_names,
                                  const std::vector<ColumnStat>& stats);

/// Greedy redundancy pruning in canonical column order: a column is kept
/// iff its |Pearson r| with every already-kept column is <= max_abs_corr.
/// With top_n set, membership is then restricted to the top_n kept columns
/// by pre-normalization std (descending, name ascending on ties); the
/// returned names stay in canonical column order.
std::vector<std::string> select_features(const FeatureMatrix& normalized,
                                         double max_abs_corr,
                                         std::optional<int> top_n);

/// Column subset in the order given by names.
FeatureMatrix subset_columns(const FeatureMatrix& m,
                             const std::vector<std::string>& names);

/// CSV: first column patient_id, then feature columns by name.
void write_feature_csv(const FeatureMatrix& m, const std::filesystem::path& path);
/// Sidecar CSV: feature,mean,std.
void write_stats_csv(const FeatureMatrix& m, const std::filesystem::path& path);

}  // namespace vitalclust::features
