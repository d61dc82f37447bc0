#include "vitalclust/ingest/filters.hpp"

#include <unordered_map>

#include "vitalclust/core/parallel.hpp"
#include "vitalclust/core/textio.hpp"

namespace vitalclust::ingest {

namespace {

struct PatientDecision {
  bool retained = false;
  std::string reason;  // set when excluded
  VitalGrid grid;
};

double to_celsius(const RawObservation& obs) {
  if (obs.channel == VitalChannel::Temperature && obs.unit && *obs.unit == "F")
    return (obs.value - 32.0) * 5.0 / 9.0;
  return obs.value;
}

}  // namespace

Cohort apply_cohort_filters(const std::vector<RawObservation>& observations,
                            const std::vector<StaticRecord>& statics,
                            int timesteps, ExclusionLog* log, int workers) {
  std::unordered_map<std::string, const StaticRecord*> static_by_id;
  for (const auto& r : statics) static_by_id[r.patient_id] = &r;

  // Group observation indices per patient, first-appearance order.
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<std::size_t>> by_patient;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    auto [it, inserted] = by_patient.try_emplace(observations[i].patient_id);
    if (inserted) order.push_back(observations[i].patient_id);
    it->second.push_back(i);
  }

  // Per-patient decisions are independent; reasons follow the fixed
  // precedence no_static > underage > duplicate_hour > incomplete_grid.
  std::vector<PatientDecision> decisions(order.size());
  parallel_for(order.size(), workers, [&](std::size_t p) {
    auto& d = decisions[p];
    const auto& id = order[p];
    const auto st = static_by_id.find(id);
    if (st == static_by_id.end()) {
      d.reason = "no_static";
      return;
    }
    if (st->second->age < 18) {
      d.reason = "underage";
      return;
    }
    Eigen::Matrix<int, kNumChannels, Eigen::Dynamic> seen =
        Eigen::Matrix<int, kNumChannels, Eigen::Dynamic>::Zero(kNumChannels,
                                                               timesteps);
    VitalGrid grid = VitalGrid::Zero(kNumChannels, timesteps);
    bool dup = false;
    for (const std::size_t i : by_patient.at(id)) {
      const auto& obs = observations[i];
      if (obs.hour >= timesteps) continue;  // beyond the grid, ignored
      const int c = static_cast<int>(obs.channel);
      if (++seen(c, obs.hour) > 1) {
        dup = true;
        break;
      }
      grid(c, obs.hour) = to_celsius(obs);
    }
    if (dup) {
      d.reason = "duplicate_hour";
      return;
    }
    if ((seen.array() != 1).any()) {
      d.reason = "incomplete_grid";
      return;
    }
    d.retained = true;
    d.grid = std::move(grid);
  });

  Cohort cohort;
  for (std::size_t p = 0; p < order.size(); ++p) {
    if (decisions[p].retained) {
      cohort.series.push_back({order[p], std::move(decisions[p].grid)});
      cohort.statics.emplace(order[p], *static_by_id[order[p]]);
    } else if (log) {
      log->add(order[p], decisions[p].reason);
    }
  }
  return cohort;
}

std::pair<Cohort, Cohort> split_by_era(const Cohort& cohort) {
  Cohort dev, val;
  for (const auto& s : cohort.series) {
    const auto it = cohort.statics.find(s.patient_id);
    Cohort& target =
        (it != cohort.statics.end() && it->second.era == Era::Validation) ? val
                                                                          : dev;
    target.series.push_back(s);
    if (it != cohort.statics.end()) target.statics.emplace(it->first, it->second);
  }
  return {std::move(dev), std::move(val)};
}

void write_exclusion_csv(const ExclusionLog& log,
                         const std::filesystem::path& path) {
  std::string out = "patient_id,reason\n";
  for (const auto& [id, reason] : log.entries)
    out += textio::csv_escape(id) + "," + reason + "\n";
  textio::write_text_file(path, out);
}

}  // namespace vitalclust::ingest
