#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vitalclust/core/types.hpp"

// CSV schemas (External Interfaces):
//   time series: patient_id,hour,channel,value,unit
//     channel in {temp,hr,mbp,rr,spo2}; unit blank, or C/F for temp only.
//   statics:     patient_id,age,gender,race,height_cm,weight_kg,
//                icu_death,hospital_death,era,dod
//     booleans 0/1, blanks allowed for optional fields,
//     era "2008-2016" -> development, "2017-2019" -> validation
//     (the words "development"/"validation" are accepted as aliases).
//
// Structural problems (missing file, wrong header, duplicate static ids,
// unknown era) throw; malformed data cells become row-level errors in the
// parse report, never silent drops.

namespace vitalclust::ingest {

struct RawObservation {
  std::string patient_id;
  int hour = 0;
  VitalChannel channel = VitalChannel::Temperature;
  double value = 0;             // as written in the file; F not yet converted
  std::optional<std::string> unit;
};

struct RowError {
  int line = 0;  // 1-based, header is line 1
  std::string message;
};

struct TimeseriesParse {
  std::vector<RawObservation> observations;
  std::vector<RowError> errors;
};

struct StaticParse {
  std::vector<StaticRecord> records;
  std::vector<RowError> errors;
};

TimeseriesParse parse_timeseries_csv(const std::filesystem::path& path);
StaticParse parse_static_csv(const std::filesystem::path& path);

void write_timeseries_csv(const std::vector<PatientSeries>& series,
                          const std::filesystem::path& path);
void write_static_csv(const std::vector<StaticRecord>& records,
                      const std::filesystem::path& path);

std::string era_column_value(Era e);  // "2008-2016" / "2017-2019"

}  // namespace vitalclust::ingest
