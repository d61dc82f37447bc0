#include "vitalclust/prognosis/report.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <map>
#include <stdexcept>

#include "vitalclust/cluster/params.hpp"
#include "vitalclust/core/hash.hpp"
#include "vitalclust/core/textio.hpp"
#include "vitalclust/prognosis/bootstrap.hpp"

namespace vitalclust::prognosis {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string subgroup_name(int label) {
  return label == cluster::kNoiseLabel ? "noise" : std::to_string(label + 1);
}

SubgroupStat make_stat(int label, const std::vector<bool>& icu,
                       const std::vector<bool>& hosp, int b, std::uint64_t seed,
                       int workers) {
  SubgroupStat st;
  st.label = label;
  st.name = subgroup_name(label);
  st.n = icu.size();
  for (const bool f : icu) st.icu_deaths += f ? 1 : 0;
  for (const bool f : hosp) st.hosp_deaths += f ? 1 : 0;
  if (icu.empty()) {
    st.empty = true;
    st.icu_mean = st.icu_se = st.hosp_mean = st.hosp_se = kNan;
    return st;
  }
  // Outcome-specific seed streams keep a subgroup's two bootstraps apart.
  const auto icu_est = mortality_bootstrap(icu, b, hash64(seed, 1), workers);
  const auto hosp_est = mortality_bootstrap(hosp, b, hash64(seed, 2), workers);
  st.icu_mean = icu_est.mean;
  st.icu_se = icu_est.se;
  st.hosp_mean = hosp_est.mean;
  st.hosp_se = hosp_est.se;
  return st;
}

std::vector<int> ranking(const std::vector<SubgroupStat>& subgroups, bool icu) {
  std::vector<const SubgroupStat*> ranked;
  for (const auto& s : subgroups)
    if (!s.empty && s.label != cluster::kNoiseLabel) ranked.push_back(&s);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [icu](const SubgroupStat* a, const SubgroupStat* b) {
                     const double ma = icu ? a->icu_mean : a->hosp_mean;
                     const double mb = icu ? b->icu_mean : b->hosp_mean;
                     if (ma != mb) return ma > mb;
                     return a->label < b->label;
                   });
  std::vector<int> out;
  for (const auto* s : ranked) out.push_back(s->label + 1);
  return out;
}

struct MemberFlags {
  std::vector<bool> icu;
  std::vector<bool> hosp;
  // Folded over member ids in order, so a subgroup's bootstrap stream
  // follows its members, not its cluster index: relabeling the input
  // renames rows without changing any number in them.
  std::uint64_t id_hash = 0xCBF29CE484222325ULL;
};

EraReport build_era(Era era,
                    const std::vector<std::pair<std::string, int>>& labels,
                    const std::unordered_map<std::string, StaticRecord>& statics,
                    const std::vector<int>& all_labels, int b, std::uint64_t seed,
                    int workers) {
  std::map<int, MemberFlags> flags;
  for (const int l : all_labels) flags[l];  // rows for every known index
  MemberFlags era_flags;
  for (const auto& [id, label] : labels) {
    const auto it = statics.find(id);
    if (it == statics.end())
      throw std::invalid_argument("subgroup_report: no static record for " + id);
    auto& f = flags[label];
    f.icu.push_back(it->second.icu_death);
    f.hosp.push_back(it->second.hospital_death);
    f.id_hash = hash64(f.id_hash, hash64_str(id));
    era_flags.icu.push_back(it->second.icu_death);
    era_flags.hosp.push_back(it->second.hospital_death);
  }

  EraReport report;
  report.era = era;
  for (const auto& [label, f] : flags)
    report.subgroups.push_back(
        make_stat(label, f.icu, f.hosp, b, hash64(seed, f.id_hash), workers));
  report.overall = make_stat(0, era_flags.icu, era_flags.hosp, b,
                             hash64(seed, hash64_str("overall")), workers);
  report.overall.name = "overall";
  report.icu_ranking = ranking(report.subgroups, true);
  report.hosp_ranking = ranking(report.subgroups, false);
  return report;
}

void append_row(std::string& out, std::string_view era, const SubgroupStat& st) {
  out += era;
  out += ',';
  out += st.name;
  out += ',';
  out += std::to_string(st.n);
  out += ',';
  out += textio::fmt_double(st.icu_mean);
  out += ',';
  out += textio::fmt_double(st.icu_se);
  out += ',';
  out += textio::fmt_double(st.hosp_mean);
  out += ',';
  out += textio::fmt_double(st.hosp_se);
  out += '\n';
}

nlohmann::json stat_to_json(const SubgroupStat& st) {
  nlohmann::json j;
  j["subgroup"] = st.name;
  j["n"] = st.n;
  j["icu_deaths"] = st.icu_deaths;
  j["hosp_deaths"] = st.hosp_deaths;
  j["icu_mean"] = st.icu_mean;
  j["icu_se"] = st.icu_se;
  j["hosp_mean"] = st.hosp_mean;
  j["hosp_se"] = st.hosp_se;
  j["empty"] = st.empty;
  return j;
}

}  // namespace

PrognosisReport subgroup_report(
    const std::vector<std::pair<std::string, int>>& dev_labels,
    const std::vector<std::pair<std::string, int>>& val_labels,
    const std::unordered_map<std::string, StaticRecord>& statics, int b,
    std::uint64_t seed, int workers) {
  if (dev_labels.empty() && val_labels.empty())
    throw std::invalid_argument("subgroup_report: no labels");

  // Shared row set so an index empty in one era still gets a flagged row.
  std::vector<int> all_labels;
  for (const auto& [id, l] : dev_labels) all_labels.push_back(l);
  for (const auto& [id, l] : val_labels) all_labels.push_back(l);
  std::sort(all_labels.begin(), all_labels.end());
  all_labels.erase(std::unique(all_labels.begin(), all_labels.end()),
                   all_labels.end());

  PrognosisReport report;
  report.seed = seed;
  report.b = b;
  if (!dev_labels.empty())
    report.eras.push_back(build_era(Era::Development, dev_labels, statics,
                                    all_labels, b, hash64(seed, hash64_str("development")),
                                    workers));
  if (!val_labels.empty())
    report.eras.push_back(build_era(Era::Validation, val_labels, statics,
                                    all_labels, b, hash64(seed, hash64_str("validation")),
                                    workers));
  return report;
}

std::string prognosis_to_csv(const PrognosisReport& report) {
  std::string out = "era,subgroup,n,icu_mean,icu_se,hosp_mean,hosp_se\n";
  for (const auto& era : report.eras) {
    for (const auto& st : era.subgroups) append_row(out, era_name(era.era), st);
    append_row(out, era_name(era.era), era.overall);
  }
  return out;
}

std::string prognosis_to_json(const PrognosisReport& report) {
  nlohmann::json doc;
  doc["uncertainty"] = "bootstrap standard error";
  doc["bootstrap_b"] = report.b;
  doc["seed"] = report.seed;
  nlohmann::json eras = nlohmann::json::array();
  for (const auto& era : report.eras) {
    nlohmann::json e;
    e["era"] = std::string(era_name(era.era));
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& st : era.subgroups) rows.push_back(stat_to_json(st));
    e["subgroups"] = std::move(rows);
    e["overall"] = stat_to_json(era.overall);
    e["icu_ranking"] = era.icu_ranking;
    e["hosp_ranking"] = era.hosp_ranking;
    eras.push_back(std::move(e));
  }
  doc["eras"] = std::move(eras);
  return doc.dump(2) + "\n";
}

void write_prognosis(const std::string& csv_path, const std::string& json_path,
                     const PrognosisReport& report) {
  textio::write_text_file(csv_path, prognosis_to_csv(report));
  textio::write_text_file(json_path, prognosis_to_json(report));
}

}  // namespace vitalclust::prognosis
