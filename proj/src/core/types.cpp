#include "vitalclust/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace vitalclust {

std::string_view channel_code(VitalChannel c) {
  switch (c) {
    case VitalChannel::Temperature: return "temp";
    case VitalChannel::HeartRate: return "hr";
    case VitalChannel::MeanBP: return "mbp";
    case VitalChannel::RespRate: return "rr";
    case VitalChannel::SpO2: return "spo2";
  }
  return "?";
}

std::optional<VitalChannel> channel_from_code(std::string_view code) {
  if (code == "temp") return VitalChannel::Temperature;
  if (code == "hr") return VitalChannel::HeartRate;
  if (code == "mbp") return VitalChannel::MeanBP;
  if (code == "rr") return VitalChannel::RespRate;
  if (code == "spo2") return VitalChannel::SpO2;
  return std::nullopt;
}

std::string_view era_name(Era e) {
  return e == Era::Development ? "development" : "validation";
}

std::vector<Violation> validate_cohort(const Cohort& cohort) {
  std::vector<Violation> out;
  std::unordered_set<std::string> seen_ids;

  for (const auto& s : cohort.series) {
    if (!seen_ids.insert(s.patient_id).second)
      out.push_back({s.patient_id, "duplicate patient_id"});
    if (s.timesteps() < 3) out.push_back({s.patient_id, "short series"});
    if (!s.grid.allFinite()) out.push_back({s.patient_id, "non-finite cell"});
    if (cohort.statics.find(s.patient_id) == cohort.statics.end())
      out.push_back({s.patient_id, "missing static record"});
  }

  for (const auto& [id, rec] : cohort.statics) {
    if (seen_ids.find(id) == seen_ids.end())
      out.push_back({id, "missing series"});
    if (rec.icu_death && !rec.hospital_death)
      out.push_back({id, "death-flag inconsistency"});
    if (rec.age < 0) out.push_back({id, "negative age"});
  }

  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return a.patient_id != b.patient_id ? a.patient_id < b.patient_id
                                        : a.rule < b.rule;
  });
  return out;
}

}  // namespace vitalclust
