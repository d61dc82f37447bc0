#include "vitalclust/features/catalog.hpp"

#include <algorithm>
#include <stdexcept>

#include "vitalclust/cluster/sbd.hpp"
#include "vitalclust/core/parallel.hpp"
#include "vitalclust/features/stats.hpp"

namespace vitalclust::features {

FeatureCatalog FeatureCatalog::v1() {
  FeatureCatalog cat;
  cat.version = "v1";
  cat.names.reserve(kCatalogColumns);
  for (int c = 0; c < kNumChannels; ++c) {
    const auto code = channel_code(static_cast<VitalChannel>(c));
    for (const char* f : kIntraFeatureNames)
      cat.names.push_back(std::string(code) + "__" + f);
  }
  for (int a = 0; a < kNumChannels; ++a) {
    for (int b = a + 1; b < kNumChannels; ++b) {
      const auto ca = channel_code(static_cast<VitalChannel>(a));
      const auto cb = channel_code(static_cast<VitalChannel>(b));
      for (const char* f : kInterFeatureNames)
        cat.names.push_back(std::string(ca) + "x" + std::string(cb) + "__" + f);
    }
  }
  return cat;
}

std::array<double, kIntraPerChannel> intra_features(
    const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() < 3)
    throw std::invalid_argument("intra_features: need at least 3 samples");

  std::vector<double> sorted(x.data(), x.data() + x.size());
  std::sort(sorted.begin(), sorted.end());

  const auto fit = stats::linear_fit(x);
  std::array<double, kIntraPerChannel> out{};
  out[0] = x.mean();
  out[1] = stats::population_std(x);
  out[2] = sorted.front();
  out[3] = sorted.back();
  out[4] = stats::quantile_sorted(sorted, 0.5);
  out[5] = stats::quantile_sorted(sorted, 0.75) - stats::quantile_sorted(sorted, 0.25);
  out[6] = stats::skewness(x);
  out[7] = stats::excess_kurtosis(x);
  out[8] = fit.slope;
  out[9] = fit.intercept;
  out[10] = stats::autocorr_lag1(x);
  out[11] = x.squaredNorm();
  out[12] = stats::mean_abs_change(x);
  out[13] = static_cast<double>(stats::mean_crossings(x));
  out[14] = x[0];
  out[15] = x[x.size() - 1];
  return out;
}

std::array<double, kInterPerPair> inter_features(
    const Eigen::Ref<const Eigen::VectorXd>& a,
    const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() < 3 || a.size() != b.size())
    throw std::invalid_argument("inter_features: need matched series, T >= 3");
  const auto ncc = cluster::ncc_scan(a, b);
  return {stats::pearson(a, b), ncc.max_ncc, static_cast<double>(ncc.best_shift)};
}

std::vector<NamedValue> extract_intra(const PatientSeries& s, VitalChannel c) {
  const Eigen::VectorXd x = s.grid.row(static_cast<int>(c)).transpose();
  const auto vals = intra_features(x);
  std::vector<NamedValue> out;
  out.reserve(kIntraPerChannel);
  for (int i = 0; i < kIntraPerChannel; ++i)
    out.push_back({std::string(channel_code(c)) + "__" + kIntraFeatureNames[i],
                   vals[i]});
  return out;
}

std::vector<NamedValue> extract_inter(const PatientSeries& s, VitalChannel a,
                                      VitalChannel b) {
  const Eigen::VectorXd xa = s.grid.row(static_cast<int>(a)).transpose();
  const Eigen::VectorXd xb = s.grid.row(static_cast<int>(b)).transpose();
  const auto vals = inter_features(xa, xb);
  const std::string prefix = std::string(channel_code(a)) + "x" +
                             std::string(channel_code(b)) + "__";
  std::vector<NamedValue> out;
  out.reserve(kInterPerPair);
  for (int i = 0; i < kInterPerPair; ++i)
    out.push_back({prefix + kInterFeatureNames[i], vals[i]});
  return out;
}

FeatureMatrix assemble_matrix(const Cohort& cohort, const FeatureCatalog& catalog,
                              int workers) {
  FeatureMatrix m;
  m.feature_names = catalog.names;
  m.patient_ids.reserve(cohort.series.size());
  for (const auto& s : cohort.series) m.patient_ids.push_back(s.patient_id);
  m.values.resize(static_cast<Eigen::Index>(cohort.series.size()),
                  static_cast<Eigen::Index>(catalog.names.size()));

  parallel_for(cohort.series.size(), workers, [&](std::size_t i) {
    const auto& grid = cohort.series[i].grid;
    Eigen::Index col = 0;
    for (int c = 0; c < kNumChannels; ++c) {
      const Eigen::VectorXd x = grid.row(c).transpose();
      for (double v : intra_features(x)) m.values(static_cast<Eigen::Index>(i), col++) = v;
    }
    for (int a = 0; a < kNumChannels; ++a) {
      for (int b = a + 1; b < kNumChannels; ++b) {
        const Eigen::VectorXd xa = grid.row(a).transpose();
        const Eigen::VectorXd xb = grid.row(b).transpose();
        for (double v : inter_features(xa, xb))
          m.values(static_cast<Eigen::Index>(i), col++) = v;
      }
    }
  });
  return m;
}

}  // namespace vitalclust::features
