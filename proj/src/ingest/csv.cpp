#include "vitalclust/ingest/csv.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "vitalclust/core/textio.hpp"

namespace vitalclust::ingest {

namespace {

void require_header(const std::vector<std::string>& got,
                    const std::vector<std::string>& want,
                    const std::filesystem::path& path) {
  if (got != want) {
    std::string msg = "bad header in " + path.string() + ": expected ";
    for (std::size_t i = 0; i < want.size(); ++i)
      msg += (i ? "," : "") + want[i];
    throw std::runtime_error(msg);
  }
}

std::optional<Era> era_from_string(const std::string& s) {
  if (s == "2008-2016" || s == "development") return Era::Development;
  if (s == "2017-2019" || s == "validation") return Era::Validation;
  return std::nullopt;
}

std::optional<bool> parse_bool01(const std::string& s) {
  if (s == "0") return false;
  if (s == "1") return true;
  return std::nullopt;
}

}  // namespace

std::string era_column_value(Era e) {
  return e == Era::Development ? "2008-2016" : "2017-2019";
}

TimeseriesParse parse_timeseries_csv(const std::filesystem::path& path) {
  const auto file = textio::read_csv(path);
  require_header(file.header, {"patient_id", "hour", "channel", "value", "unit"},
                 path);

  TimeseriesParse out;
  out.observations.reserve(file.rows.size());
  for (const auto& row : file.rows) {
    if (row.fields.size() != 5) {
      out.errors.push_back({row.line, "expected 5 fields"});
      continue;
    }
    const auto& id = row.fields[0];
    const auto& hour_s = row.fields[1];
    const auto& chan_s = row.fields[2];
    const auto& value_s = row.fields[3];
    const auto& unit_s = row.fields[4];
    if (id.empty()) {
      out.errors.push_back({row.line, "empty patient_id"});
      continue;
    }
    const auto hour = textio::parse_int(hour_s);
    if (!hour || *hour < 0) {
      out.errors.push_back({row.line, "bad hour '" + hour_s + "'"});
      continue;
    }
    const auto chan = channel_from_code(chan_s);
    if (!chan) {
      out.errors.push_back({row.line, "unknown channel '" + chan_s + "'"});
      continue;
    }
    const auto value = textio::parse_double(value_s);
    if (!value || !std::isfinite(*value)) {
      out.errors.push_back({row.line, "non-numeric value '" + value_s + "'"});
      continue;
    }
    std::optional<std::string> unit;
    if (!unit_s.empty()) {
      if (*chan != VitalChannel::Temperature || (unit_s != "C" && unit_s != "F")) {
        out.errors.push_back({row.line, "bad unit '" + unit_s + "'"});
        continue;
      }
      unit = unit_s;
    }
    out.observations.push_back(
        {id, static_cast<int>(*hour), *chan, *value, std::move(unit)});
  }
  return out;
}

StaticParse parse_static_csv(const std::filesystem::path& path) {
  const auto file = textio::read_csv(path);
  require_header(file.header,
                 {"patient_id", "age", "gender", "race", "height_cm",
                  "weight_kg", "icu_death", "hospital_death", "era", "dod"},
                 path);

  StaticParse out;
  std::unordered_set<std::string> seen;
  out.records.reserve(file.rows.size());
  for (const auto& row : file.rows) {
    if (row.fields.size() != 10) {
      out.errors.push_back({row.line, "expected 10 fields"});
      continue;
    }
    StaticRecord rec;
    rec.patient_id = row.fields[0];
    if (rec.patient_id.empty()) {
      out.errors.push_back({row.line, "empty patient_id"});
      continue;
    }
    if (!seen.insert(rec.patient_id).second)
      throw std::runtime_error("duplicate patient_id '" + rec.patient_id +
                               "' in " + path.string() + " (line " +
                               std::to_string(row.line) + ")");

    const auto age = textio::parse_int(row.fields[1]);
    if (!age || *age < 0) {
      out.errors.push_back({row.line, "bad age '" + row.fields[1] + "'"});
      continue;
    }
    rec.age = static_cast<int>(*age);
    rec.gender = row.fields[2];
    if (!row.fields[3].empty()) rec.race = row.fields[3];

    bool row_ok = true;
    for (const auto& [idx, field] : {std::pair<int, const char*>{4, "height_cm"},
                                     std::pair<int, const char*>{5, "weight_kg"}}) {
      const auto& cell = row.fields[static_cast<std::size_t>(idx)];
      if (cell.empty()) continue;
      const auto v = textio::parse_double(cell);
      if (!v || !std::isfinite(*v)) {
        out.errors.push_back({row.line, std::string("bad ") + field + " '" + cell + "'"});
        row_ok = false;
        break;
      }
      (idx == 4 ? rec.height_cm : rec.weight_kg) = *v;
    }
    if (!row_ok) continue;

    const auto icu = parse_bool01(row.fields[6]);
    const auto hosp = parse_bool01(row.fields[7]);
    if (!icu || !hosp) {
      out.errors.push_back({row.line, "death flags must be 0/1"});
      continue;
    }
    rec.icu_death = *icu;
    rec.hospital_death = *hosp;

    const auto era = era_from_string(row.fields[8]);
    if (!era)
      throw std::runtime_error("unknown era '" + row.fields[8] + "' in " +
                               path.string() + " (line " +
                               std::to_string(row.line) + ")");
    rec.era = *era;
    if (!row.fields[9].empty()) rec.dod = row.fields[9];
    out.records.push_back(std::move(rec));
  }
  return out;
}

void write_timeseries_csv(const std::vector<PatientSeries>& series,
                          const std::filesystem::path& path) {
  std::string out = "patient_id,hour,channel,value,unit\n";
  for (const auto& s : series) {
    for (int c = 0; c < kNumChannels; ++c) {
      const auto code = channel_code(static_cast<VitalChannel>(c));
      for (int t = 0; t < s.timesteps(); ++t) {
        out += textio::csv_escape(s.patient_id) + "," + std::to_string(t) + "," +
               std::string(code) + "," + textio::fmt_double(s.grid(c, t)) + ",\n";
      }
    }
  }
  textio::write_text_file(path, out);
}

void write_static_csv(const std::vector<StaticRecord>& records,
                      const std::filesystem::path& path) {
  std::string out =
      "patient_id,age,gender,race,height_cm,weight_kg,icu_death,"
      "hospital_death,era,dod\n";
  for (const auto& r : records) {
    out += textio::csv_escape(r.patient_id) + "," + std::to_string(r.age) + "," +
           textio::csv_escape(r.gender) + "," +
           (r.race ? textio::csv_escape(*r.race) : "") + "," +
           (r.height_cm ? textio::fmt_double(*r.height_cm) : "") + "," +
           (r.weight_kg ? textio::fmt_double(*r.weight_kg) : "") + "," +
           (r.icu_death ? "1" : "0") + "," + (r.hospital_death ? "1" : "0") +
           "," + era_column_value(r.era) + "," +
           (r.dod ? textio::csv_escape(*r.dod) : "") + "\n";
  }
  textio::write_text_file(path, out);
}

}  // namespace vitalclust::ingest
