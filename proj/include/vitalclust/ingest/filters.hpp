#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vitalclust/core/types.hpp"
#include "vitalclust/ingest/csv.hpp"

namespace vitalclust::ingest {

// Exclusion reasons in precedence order; a patient is counted once under
// the first reason that fires.
inline constexpr const char* kExclusionReasons[] = {"no_static", "underage",
                                                    "duplicate_hour",
                                                    "incomplete_grid"};

struct ExclusionLog {
  std::vector<std::pair<std::string, std::string>> entries;  // id, reason
  std::map<std::string, int> counts;

  void add(const std::string& id, const std::string& reason) {
    entries.emplace_back(id, reason);
    ++counts[reason];
  }
};

/// Builds the cohort: keeps patients with a static record, age >= 18 and a
/// complete 5 x T grid (hours 0..T-1, each cell present exactly once).
/// Temperatures with unit F are converted to C here. Patients appear in the
/// output in order of first appearance in the observation list.
Cohort apply_cohort_filters(const std::vector<RawObservation>& observations,
                            const std::vector<StaticRecord>& statics, int timesteps,
                            ExclusionLog* log = nullptr, int workers = 1);

std::pair<Cohort, Cohort> split_by_era(const Cohort& cohort);

void write_exclusion_csv(const ExclusionLog& log, const std::filesystem::path& path);

}  // namespace vitalclust::ingest
