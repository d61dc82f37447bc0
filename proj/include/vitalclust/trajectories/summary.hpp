#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "vitalclust/core/types.hpp"

namespace vitalclust::trajectories {

// Hourly aggregate of one (subgroup, channel) in raw physical units.
struct TrajectorySeries {
  int label = 0;  // cluster index; kNoiseLabel allowed
  std::string subgroup;  // "1"-based number or "noise"
  VitalChannel channel = VitalChannel::Temperature;
  std::size_t n = 0;
  Eigen::VectorXd mean;  // length T
  Eigen::VectorXd std;   // population
  Eigen::VectorXd se;    // std / sqrt(n)
};

struct TrajectorySummary {
  Era era = Era::Development;
  int timesteps = 0;
  std::vector<TrajectorySeries> series;  // ascending label, channel order
};

// Pointwise mean/std/se per (subgroup, channel, hour). Members are summed
// in ascending patient-id order, which makes the result bit-for-bit
// independent of input row order.
TrajectorySummary aggregate(const std::vector<PatientSeries>& cohort,
                            const std::vector<std::pair<std::string, int>>& labels,
                            Era era);

// `era,subgroup,channel,hour,n,mean,std,se`, rows in summary order.
std::string summary_to_csv(const TrajectorySummary& summary);

// One panel per channel, one polyline per subgroup over a +/- band_mult*se
// band. Fixed canvas and palette, no timestamps: identical summaries give
// identical bytes.
std::string summary_to_svg(const TrajectorySummary& summary, double band_mult = 1.0);

// trajectories_<era>.csv / trajectories_<era>.svg under out_dir; returns
// the two paths written.
std::vector<std::string> emit_plot_data(const TrajectorySummary& summary,
                                        const std::string& out_dir,
                                        double band_mult = 1.0);

}  // namespace vitalclust::trajectories
