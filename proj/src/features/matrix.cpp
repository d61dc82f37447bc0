#include "vitalclust/features/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "vitalclust/core/textio.hpp"
#include "vitalclust/features/stats.hpp"

namespace vitalclust::features {

std::optional<Eigen::Index> FeatureMatrix::column_index(
    const std::string& name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) return std::nullopt;
  return static_cast<Eigen::Index>(it - feature_names.begin());
}

FeatureMatrix clean_features(const FeatureMatrix& m,
                             std::vector<DroppedColumn>* dropped) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const auto col = m.values.col(j);
    if (!col.allFinite()) {
      if (dropped) dropped->push_back({m.feature_names[j], "non-finite"});
      continue;
    }
    if (stats::population_std(col) < stats::kVarianceFloor) {
      if (dropped) dropped->push_back({m.feature_names[j], "zero variance"});
      continue;
    }
    keep.push_back(j);
  }
  FeatureMatrix out;
  out.patient_ids = m.patient_ids;
  out.values.resize(m.rows(), static_cast<Eigen::Index>(keep.size()));
  out.feature_names.reserve(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.feature_names.push_back(m.feature_names[keep[k]]);
    out.values.col(static_cast<Eigen::Index>(k)) = m.values.col(keep[k]);
  }
  return out;
}

FeatureMatrix normalize_features(const FeatureMatrix& m) {
  FeatureMatrix out;
  out.patient_ids = m.patient_ids;
  out.feature_names = m.feature_names;
  out.values.resize(m.rows(), m.cols());
  std::vector<ColumnStat> stats_list;
  stats_list.reserve(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const auto col = m.values.col(j);
    const double mean = col.mean();
    const double sd = stats::population_std(col);
    stats_list.push_back({mean, sd});
    if (sd < stats::kVarianceFloor)
      out.values.col(j).setZero();
    else
      out.values.col(j) = (col.array() - mean) / sd;
  }
  out.column_stats = std::move(stats_list);
  return out;
}

FeatureMatrix apply_normalization(const FeatureMatrix& raw,
                                  const std::vector<std::string>& feature_names,
                                  const std::vector<ColumnStat>& stats_list) {
  if (feature_names.size() != stats_list.size())
    throw std::invalid_argument("apply_normalization: names/stats size mismatch");
  FeatureMatrix out;
  out.patient_ids = raw.patient_ids;
  out.feature_names = feature_names;
  out.column_stats = stats_list;
  out.values.resize(raw.rows(), static_cast<Eigen::Index>(feature_names.size()));
  for (std::size_t k = 0; k < feature_names.size(); ++k) {
    const auto j = raw.column_index(feature_names[k]);
    if (!j)
      throw std::invalid_argument("apply_normalization: missing feature " +
                                  feature_names[k]);
    const auto col = raw.values.col(*j);
    const auto& st = stats_list[k];
    if (st.std < stats::kVarianceFloor)
      out.values.col(static_cast<Eigen::Index>(k)).setZero();
    else
      out.values.col(static_cast<Eigen::Index>(k)) = (col.array() - st.mean) / st.std;
  }
  return out;
}

std::vector<std::string> select_features(const FeatureMatrix& normalized,
                                         double max_abs_corr,
                                         std::optional<int> top_n) {
  if (!(max_abs_corr > 0.0 && max_abs_corr <= 1.0))
    throw std::invalid_argument("select_features: max_abs_corr must be in (0,1]");
  if (!normalized.column_stats)
    throw std::invalid_argument("select_features: matrix has no recorded stats");

  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < normalized.cols(); ++j) {
    bool ok = true;
    for (const Eigen::Index k : kept) {
      const double r = stats::pearson(normalized.values.col(j),
                                      normalized.values.col(k));
      if (std::abs(r) > max_abs_corr) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(j);
  }

  if (top_n && static_cast<int>(kept.size()) > *top_n) {
    // Rank by dispersion of the pre-normalization column.
    std::vector<Eigen::Index> ranked = kept;
    std::sort(ranked.begin(), ranked.end(), [&](Eigen::Index a, Eigen::Index b) {
      const double sa = (*normalized.column_stats)[static_cast<std::size_t>(a)].std;
      const double sb = (*normalized.column_stats)[static_cast<std::size_t>(b)].std;
      if (sa != sb) return sa > sb;
      return normalized.feature_names[a] < normalized.feature_names[b];
    });
    ranked.resize(static_cast<std::size_t>(*top_n));
    std::sort(ranked.begin(), ranked.end());  // back to canonical order
    kept = std::move(ranked);
  }

  std::vector<std::string> names;
  names.reserve(kept.size());
  for (const Eigen::Index j : kept) names.push_back(normalized.feature_names[j]);
  return names;
}

FeatureMatrix subset_columns(const FeatureMatrix& m,
                             const std::vector<std::string>& names) {
  FeatureMatrix out;
  out.patient_ids = m.patient_ids;
  out.feature_names = names;
  out.values.resize(m.rows(), static_cast<Eigen::Index>(names.size()));
  std::vector<ColumnStat> stats_subset;
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto j = m.column_index(names[k]);
    if (!j) throw std::invalid_argument("subset_columns: missing feature " + names[k]);
    out.values.col(static_cast<Eigen::Index>(k)) = m.values.col(*j);
    if (m.column_stats)
      stats_subset.push_back((*m.column_stats)[static_cast<std::size_t>(*j)]);
  }
  if (m.column_stats) out.column_stats = std::move(stats_subset);
  return out;
}

void write_feature_csv(const FeatureMatrix& m, const std::filesystem::path& path) {
  std::string out = "patient_id";
  for (const auto& name : m.feature_names) out += "," + textio::csv_escape(name);
  out += "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += textio::csv_escape(m.patient_ids[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out += "," + textio::fmt_double(m.values(i, j));
    out += "\n";
  }
  textio::write_text_file(path, out);
}

void write_stats_csv(const FeatureMatrix& m, const std::filesystem::path& path) {
  if (!m.column_stats)
    throw std::invalid_argument("write_stats_csv: matrix has no recorded stats");
  std::string out = "feature,mean,std\n";
  for (std::size_t j = 0; j < m.feature_names.size(); ++j) {
    const auto& st = (*m.column_stats)[j];
    out += textio::csv_escape(m.feature_names[j]) + "," +
           textio::fmt_double(st.mean) + "," + textio::fmt_double(st.std) + "\n";
  }
  textio::write_text_file(path, out);
}

}  // namespace vitalclust::features
