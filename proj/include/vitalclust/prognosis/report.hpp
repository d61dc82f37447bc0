#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "vitalclust/core/types.hpp"

namespace vitalclust::prognosis {

struct SubgroupStat {
  int label = 0;      // cluster index; kNoiseLabel for DBSCAN noise
  std::string name;   // "1"-based subgroup number, "noise", or "overall"
  std::size_t n = 0;
  // Integer death counts, kept so the weighted-mean identity can be
  // checked exactly instead of through float means.
  std::size_t icu_deaths = 0;
  std::size_t hosp_deaths = 0;
  double icu_mean = 0, icu_se = 0;
  double hosp_mean = 0, hosp_se = 0;
  bool empty = false;  // flagged, means/SEs are NaN
};

struct EraReport {
  Era era = Era::Development;
  std::vector<SubgroupStat> subgroups;  // ascending cluster index
  SubgroupStat overall;
  // Subgroup numbers (1-based), mortality mean descending, ties to the
  // lower number. Noise and empty subgroups are not ranked.
  std::vector<int> icu_ranking;
  std::vector<int> hosp_ranking;
};

struct PrognosisReport {
  std::uint64_t seed = 0;
  int b = 1000;
  std::vector<EraReport> eras;  // development first, then validation
};

// Per era and subgroup: n, bootstrap mortality mean +/- SE for both
// outcomes, the overall-era row, and the mortality rankings. Labels of an
// era may be empty (that era is skipped). A cluster index present in one
// era but not the other yields an empty-flagged row, never a fabricated
// one. Every patient id must have a static record.
PrognosisReport subgroup_report(
    const std::vector<std::pair<std::string, int>>& dev_labels,
    const std::vector<std::pair<std::string, int>>& val_labels,
    const std::unordered_map<std::string, StaticRecord>& statics, int b,
    std::uint64_t seed, int workers = 1);

// CSV `era,subgroup,n,icu_mean,icu_se,hosp_mean,hosp_se` (subgroup rows in
// report order, overall last per era) and a JSON summary carrying the
// integer death counts, rankings, B, and seed.
std::string prognosis_to_csv(const PrognosisReport& report);
std::string prognosis_to_json(const PrognosisReport& report);
void write_prognosis(const std::string& csv_path, const std::string& json_path,
                     const PrognosisReport& report);

}  // namespace vitalclust::prognosis
