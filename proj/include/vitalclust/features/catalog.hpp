#pragma once

#include <array>
#include <string>
#include <vector>

#include "vitalclust/core/types.hpp"
#include "vitalclust/features/matrix.hpp"

// The fixed, versioned feature catalog: 16 intra-signal features per
// channel plus 3 inter-signal features per unordered channel pair
// (5*16 + 10*3 = 110 columns). Intra names are <channel>__<feature>,
// inter names <chanA>x<chanB>__<feature> with A before B in canonical
// channel order.

namespace vitalclust::features {

inline constexpr int kIntraPerChannel = 16;
inline constexpr int kInterPerPair = 3;
inline constexpr int kNumPairs = 10;
inline constexpr int kCatalogColumns =
    kNumChannels * kIntraPerChannel + kNumPairs * kInterPerPair;

inline constexpr std::array<const char*, kIntraPerChannel> kIntraFeatureNames = {
    "mean",      "std",       "min",     "max",
    "median",    "iqr",       "skew",    "kurtosis",
    "slope",     "intercept", "acf1",    "abs_energy",
    "mean_abs_change", "mean_crossings", "first", "last",
};

inline constexpr std::array<const char*, kInterPerPair> kInterFeatureNames = {
    "pearson", "xcorr_max", "xcorr_shift"};

struct NamedValue {
  std::string name;
  double value = 0;
};

struct FeatureCatalog {
  std::string version;
  std::vector<std::string> names;  // all 110, canonical order

  static FeatureCatalog v1();
};

/// The 16 intra-signal features of one channel; requires T >= 3.
std::array<double, kIntraPerChannel> intra_features(
    const Eigen::Ref<const Eigen::VectorXd>& x);

/// The 3 inter-signal features of a channel pair; requires T >= 3.
std::array<double, kInterPerPair> inter_features(
    const Eigen::Ref<const Eigen::VectorXd>& a,
    const Eigen::Ref<const Eigen::VectorXd>& b);

std::vector<NamedValue> extract_intra(const PatientSeries& s, VitalChannel c);
std::vector<NamedValue> extract_inter(const PatientSeries& s, VitalChannel a,
                                      VitalChannel b);

/// One row per patient in cohort order, 110 canonical columns. Rows are
/// extracted independently (parallel over patients, preassigned slots).
FeatureMatrix assemble_matrix(const Cohort& cohort, const FeatureCatalog& catalog,
                              int workers = 1);

}  // namespace vitalclust::features
