#include "vitalclust/trajectories/summary.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iterator>
#include <limits>
#include <map>
#include <stdexcept>

#include "vitalclust/cluster/params.hpp"
#include "vitalclust/core/textio.hpp"

namespace vitalclust::trajectories {

namespace {

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#bcbd22"};
constexpr const char* kNoiseColor = "#7f7f7f";

std::string subgroup_name(int label) {
  return label == cluster::kNoiseLabel ? "noise" : std::to_string(label + 1);
}

// Keyed on the cluster index, so a subgroup keeps its color across eras
// and whether or not a noise group is present.
const char* subgroup_color(int label) {
  if (label == cluster::kNoiseLabel) return kNoiseColor;
  return kPalette[static_cast<std::size_t>(label) % std::size(kPalette)];
}

std::string_view channel_unit(VitalChannel c) {
  switch (c) {
    case VitalChannel::Temperature: return "degC";
    case VitalChannel::HeartRate: return "bpm";
    case VitalChannel::MeanBP: return "mmHg";
    case VitalChannel::RespRate: return "breaths/min";
    case VitalChannel::SpO2: return "%";
  }
  return "";
}

}  // namespace

TrajectorySummary aggregate(const std::vector<PatientSeries>& cohort,
                            const std::vector<std::pair<std::string, int>>& labels,
                            Era era) {
  if (cohort.empty()) throw std::invalid_argument("aggregate: empty cohort");
  const int t = cohort.front().timesteps();

  std::map<std::string, const PatientSeries*> by_id;
  for (const auto& s : cohort) {
    if (s.timesteps() != t)
      throw std::invalid_argument("aggregate: unequal series lengths");
    by_id.emplace(s.patient_id, &s);
  }

  // Members per subgroup, ascending patient id for order-free sums.
  std::map<int, std::vector<const PatientSeries*>> groups;
  for (const auto& [id, label] : labels) {
    const auto it = by_id.find(id);
    if (it == by_id.end())
      throw std::invalid_argument("aggregate: label for unknown patient " + id);
    groups[label].push_back(it->second);
  }
  for (auto& [label, members] : groups)
    std::sort(members.begin(), members.end(),
              [](const PatientSeries* a, const PatientSeries* b) {
                return a->patient_id < b->patient_id;
              });

  TrajectorySummary summary;
  summary.era = era;
  summary.timesteps = t;
  for (const auto& [label, members] : groups) {
    const auto n = members.size();
    const double dn = static_cast<double>(n);
    for (int c = 0; c < kNumChannels; ++c) {
      TrajectorySeries ts;
      ts.label = label;
      ts.subgroup = subgroup_name(label);
      ts.channel = static_cast<VitalChannel>(c);
      ts.n = n;
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(t);
      for (const auto* m : members) sum += m->grid.row(c).transpose();
      ts.mean = sum / dn;
      Eigen::VectorXd sq = Eigen::VectorXd::Zero(t);
      for (const auto* m : members)
        sq += (m->grid.row(c).transpose() - ts.mean).array().square().matrix();
      ts.std = (sq / dn).array().sqrt();
      ts.se = ts.std / std::sqrt(dn);
      summary.series.push_back(std::move(ts));
    }
  }
  return summary;
}

std::string summary_to_csv(const TrajectorySummary& summary) {
  std::string out = "era,subgroup,channel,hour,n,mean,std,se\n";
  for (const auto& ts : summary.series) {
    for (int h = 0; h < summary.timesteps; ++h) {
      out += era_name(summary.era);
      out += ',';
      out += ts.subgroup;
      out += ',';
      out += channel_code(ts.channel);
      out += ',';
      out += std::to_string(h);
      out += ',';
      out += std::to_string(ts.n);
      out += ',';
      out += textio::fmt_double(ts.mean[h]);
      out += ',';
      out += textio::fmt_double(ts.std[h]);
      out += ',';
      out += textio::fmt_double(ts.se[h]);
      out += '\n';
    }
  }
  return out;
}

std::string summary_to_svg(const TrajectorySummary& summary, double band_mult) {
  if (summary.series.empty()) throw std::invalid_argument("svg: empty summary");
  const int t = summary.timesteps;

  constexpr double kWidth = 900.0, kPanelH = 150.0, kTop = 40.0, kGap = 26.0;
  constexpr double kLeft = 70.0, kRight = 30.0;
  const double height = kTop + kNumChannels * (kPanelH + kGap);

  // Subgroups in series order (already ascending label).
  std::vector<int> subgroup_labels;
  for (const auto& ts : summary.series)
    if (std::find(subgroup_labels.begin(), subgroup_labels.end(), ts.label) ==
        subgroup_labels.end())
      subgroup_labels.push_back(ts.label);

  const auto fmt = [](double v) { return textio::fmt_double_fixed(v, 2); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
         "\" height=\"" + fmt(height) + "\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kLeft) + "\" y=\"24\" font-size=\"16\">" +
         std::string(era_name(summary.era)) + " cohort vital-sign trajectories" +
         "</text>\n";

  for (int c = 0; c < kNumChannels; ++c) {
    const auto channel = static_cast<VitalChannel>(c);
    const double panel_top = kTop + c * (kPanelH + kGap);
    const double panel_bottom = panel_top + kPanelH;
    const double plot_w = kWidth - kLeft - kRight;

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& ts : summary.series) {
      if (ts.channel != channel) continue;
      lo = std::min(lo, (ts.mean - band_mult * ts.se).minCoeff());
      hi = std::max(hi, (ts.mean + band_mult * ts.se).maxCoeff());
    }
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const auto sx = [&](int h) {
      return kLeft + (t > 1 ? plot_w * h / static_cast<double>(t - 1) : plot_w / 2);
    };
    const auto sy = [&](double v) {
      return panel_bottom - kPanelH * (v - lo) / (hi - lo);
    };

    svg += "<g>\n";
    svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(panel_top) + "\" width=\"" +
           fmt(plot_w) + "\" height=\"" + fmt(kPanelH) +
           "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
    svg += "<text x=\"" + fmt(kLeft) + "\" y=\"" + fmt(panel_top - 6.0) +
           "\" font-size=\"12\">" + std::string(channel_code(channel)) + " (" +
           std::string(channel_unit(channel)) + ")</text>\n";
    svg += "<text x=\"" + fmt(kLeft - 6.0) + "\" y=\"" + fmt(panel_bottom) +
           "\" font-size=\"10\" text-anchor=\"end\">" + fmt(lo) + "</text>\n";
    svg += "<text x=\"" + fmt(kLeft - 6.0) + "\" y=\"" + fmt(panel_top + 10.0) +
           "\" font-size=\"10\" text-anchor=\"end\">" + fmt(hi) + "</text>\n";

    for (const auto& ts : summary.series) {
      if (ts.channel != channel) continue;
      const char* color = subgroup_color(ts.label);

      std::string band = "<polygon fill=\"" + std::string(color) +
                         "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
      for (int h = 0; h < t; ++h)
        band += fmt(sx(h)) + "," + fmt(sy(ts.mean[h] + band_mult * ts.se[h])) + " ";
      for (int h = t - 1; h >= 0; --h)
        band += fmt(sx(h)) + "," + fmt(sy(ts.mean[h] - band_mult * ts.se[h])) + " ";
      band += "\"/>\n";
      svg += band;

      std::string line = "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                         "\" stroke-width=\"1.5\" points=\"";
      for (int h = 0; h < t; ++h)
        line += fmt(sx(h)) + "," + fmt(sy(ts.mean[h])) + " ";
      line += "\"/>\n";
      svg += line;
    }
    svg += "</g>\n";
  }

  // Legend along the top edge.
  double lx = kWidth - kRight - 110.0 * static_cast<double>(subgroup_labels.size());
  for (std::size_t s = 0; s < subgroup_labels.size(); ++s) {
    const char* color = subgroup_color(subgroup_labels[s]);
    svg += "<rect x=\"" + fmt(lx) + "\" y=\"14\" width=\"12\" height=\"12\" fill=\"" +
           std::string(color) + "\"/>\n";
    svg += "<text x=\"" + fmt(lx + 16.0) + "\" y=\"24\" font-size=\"12\">subgroup " +
           subgroup_name(subgroup_labels[s]) + "</text>\n";
    lx += 110.0;
  }

  svg += "</svg>\n";
  return svg;
}

std::vector<std::string> emit_plot_data(const TrajectorySummary& summary,
                                        const std::string& out_dir,
                                        double band_mult) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string stem =
      (fs::path(out_dir) / ("trajectories_" + std::string(era_name(summary.era))))
          .string();
  const std::string csv_path = stem + ".csv";
  const std::string svg_path = stem + ".svg";
  textio::write_text_file(csv_path, summary_to_csv(summary));
  textio::write_text_file(svg_path, summary_to_svg(summary, band_mult));
  return {csv_path, svg_path};
}

}  // namespace vitalclust::trajectories
