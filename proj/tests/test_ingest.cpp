#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "vitalclust/core/textio.hpp"
#include "vitalclust/ingest/csv.hpp"
#include "vitalclust/ingest/filters.hpp"
#include "vitalclust/ingest/synthetic.hpp"

using namespace vitalclust;
using namespace vitalclust::ingest;

TEST_SUITE_BEGIN("ingest");

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / name;
  textio::write_text_file(p, text);
  return p;
}

const char* kTsHeader = "patient_id,hour,channel,value,unit\n";
const char* kStHeader =
    "patient_id,age,gender,race,height_cm,weight_kg,icu_death,hospital_death,"
    "era,dod\n";

std::string full_grid_rows(const std::string& id, int timesteps, double base) {
  std::string out;
  for (int c = 0; c < kNumChannels; ++c) {
    const auto code = std::string(channel_code(static_cast<VitalChannel>(c)));
    for (int t = 0; t < timesteps; ++t)
      out += id + "," + std::to_string(t) + "," + code + "," +
             textio::fmt_double(base + c + 0.25 * t) + ",\n";
  }
  return out;
}

}  // namespace

TEST_CASE("timeseries parser separates rows from row errors") {
  const auto p = temp_file("vt_ts1.csv", std::string(kTsHeader) +
                                             "p1,0,temp,36.5,\n"
                                             "p1,one,temp,36.5,\n"   // bad hour
                                             "p1,1,bogus,36.5,\n"    // bad channel
                                             "p1,2,temp,warm,\n"     // bad value
                                             "p1,3,hr,80,F\n"        // F on non-temp
                                             "p1,4,temp,98.6,F\n");  // fine
  const auto r = parse_timeseries_csv(p);
  REQUIRE(r.observations.size() == 2);
  CHECK(r.observations[0].patient_id == "p1");
  CHECK(r.observations[0].hour == 0);
  CHECK(r.observations[0].channel == VitalChannel::Temperature);
  CHECK(r.observations[0].value == 36.5);
  CHECK_FALSE(r.observations[0].unit.has_value());
  CHECK(r.observations[1].unit == "F");
  REQUIRE(r.errors.size() == 4);
  // Header is line 1, so the first bad row is line 3.
  CHECK(r.errors[0].line == 3);
  CHECK(r.errors[1].line == 4);
  CHECK(r.errors[2].line == 5);
  CHECK(r.errors[3].line == 6);
}

TEST_CASE("timeseries parser rejects structural problems") {
  CHECK_THROWS(parse_timeseries_csv("/nonexistent/ts.csv"));
  const auto p = temp_file("vt_ts2.csv", "wrong,header\n");
  CHECK_THROWS_AS(parse_timeseries_csv(p), std::runtime_error);
}

TEST_CASE("static parser maps eras and optional fields") {
  const auto p = temp_file("vt_st1.csv",
                           std::string(kStHeader) +
                               "p1,67,F,White,162.5,70,0,1,2008-2016,2016-03-01\n"
                               "p2,45,M,,,,1,1,2017-2019,\n"
                               "p3,45,M,,,,0,0,development,\n"
                               "p4,nn,M,,,,0,0,2008-2016,\n"   // bad age
                               "p5,50,M,,,,2,0,2008-2016,\n"); // bad flag
  const auto r = parse_static_csv(p);
  REQUIRE(r.records.size() == 3);
  CHECK(r.records[0].era == Era::Development);
  CHECK(r.records[0].height_cm == 162.5);
  CHECK(r.records[0].dod == "2016-03-01");
  CHECK(r.records[0].hospital_death);
  CHECK_FALSE(r.records[0].icu_death);
  CHECK(r.records[1].era == Era::Validation);
  CHECK_FALSE(r.records[1].race.has_value());
  CHECK_FALSE(r.records[1].dod.has_value());
  CHECK(r.records[2].era == Era::Development);
  REQUIRE(r.errors.size() == 2);
  CHECK(r.errors[0].line == 5);
  CHECK(r.errors[1].line == 6);
}

TEST_CASE("static parser throws on duplicate ids and unknown eras") {
  const auto dup = temp_file("vt_st2.csv", std::string(kStHeader) +
                                               "p1,50,M,,,,0,0,2008-2016,\n"
                                               "p1,51,M,,,,0,0,2008-2016,\n");
  CHECK_THROWS_AS(parse_static_csv(dup), std::runtime_error);
  const auto era = temp_file("vt_st3.csv", std::string(kStHeader) +
                                               "p1,50,M,,,,0,0,1999-2001,\n");
  CHECK_THROWS_AS(parse_static_csv(era), std::runtime_error);
}

namespace {

StaticRecord adult(const std::string& id, Era era = Era::Development) {
  StaticRecord r;
  r.patient_id = id;
  r.age = 50;
  r.gender = "F";
  r.era = era;
  return r;
}

}  // namespace

TEST_CASE("cohort filters exclude by the documented precedence") {
  const int T = 4;
  std::vector<RawObservation> obs;
  auto add_grid = [&](const std::string& id) {
    for (int c = 0; c < kNumChannels; ++c)
      for (int t = 0; t < T; ++t)
        obs.push_back({id, t, static_cast<VitalChannel>(c), 40.0 + c, std::nullopt});
  };
  add_grid("keep");
  add_grid("orphan");  // no static record
  add_grid("minor");   // underage
  add_grid("dup");     // duplicate hour, also incomplete later in file
  obs.push_back({"dup", 0, VitalChannel::HeartRate, 99.0, std::nullopt});
  add_grid("gap");     // incomplete grid
  obs.erase(std::remove_if(obs.begin(), obs.end(),
                           [](const RawObservation& o) {
                             return o.patient_id == "gap" && o.hour == 2 &&
                                    o.channel == VitalChannel::SpO2;
                           }),
            obs.end());

  std::vector<StaticRecord> statics = {adult("keep"), adult("dup"), adult("gap")};
  statics.push_back(adult("minor"));
  statics.back().age = 17;

  ExclusionLog log;
  const Cohort cohort = apply_cohort_filters(obs, statics, T, &log);
  REQUIRE(cohort.size() == 1);
  CHECK(cohort.series[0].patient_id == "keep");
  CHECK(cohort.series[0].timesteps() == T);
  CHECK(log.counts.at("no_static") == 1);
  CHECK(log.counts.at("underage") == 1);
  CHECK(log.counts.at("duplicate_hour") == 1);
  CHECK(log.counts.at("incomplete_grid") == 1);
  // One entry per excluded patient, first matching reason only.
  CHECK(log.entries.size() == 4);
}

TEST_CASE("fahrenheit temperatures convert to celsius") {
  const int T = 3;
  std::vector<RawObservation> obs;
  for (int c = 0; c < kNumChannels; ++c)
    for (int t = 0; t < T; ++t) {
      RawObservation o{"p1", t, static_cast<VitalChannel>(c), 50.0, std::nullopt};
      if (c == 0) {
        o.value = 96.8;
        o.unit = "F";
      }
      obs.push_back(o);
    }
  const Cohort cohort = apply_cohort_filters(obs, {adult("p1")}, T);
  REQUIRE(cohort.size() == 1);
  CHECK(cohort.series[0].grid(0, 0) == doctest::Approx(36.0).epsilon(1e-12));
  CHECK(cohort.series[0].grid(1, 0) == 50.0);
}

TEST_CASE("cohort keeps first-appearance order and splits by era") {
  const int T = 3;
  std::vector<RawObservation> obs;
  for (const std::string id : {"b", "a", "c"})
    for (int c = 0; c < kNumChannels; ++c)
      for (int t = 0; t < T; ++t)
        obs.push_back({id, t, static_cast<VitalChannel>(c), 1.0, std::nullopt});
  const std::vector<StaticRecord> statics = {
      adult("a", Era::Validation), adult("b"), adult("c")};
  const Cohort cohort = apply_cohort_filters(obs, statics, T);
  REQUIRE(cohort.size() == 3);
  CHECK(cohort.series[0].patient_id == "b");
  CHECK(cohort.series[1].patient_id == "a");
  CHECK(cohort.series[2].patient_id == "c");

  const auto [dev, val] = split_by_era(cohort);
  REQUIRE(dev.size() == 2);
  REQUIRE(val.size() == 1);
  CHECK(dev.series[0].patient_id == "b");
  CHECK(dev.series[1].patient_id == "c");
  CHECK(val.series[0].patient_id == "a");
  CHECK(val.statics.count("a") == 1);
  CHECK(dev.statics.count("a") == 0);
}

TEST_CASE("csv writers round-trip through the parsers") {
  const auto dir = std::filesystem::temp_directory_path();
  SyntheticSpec spec;
  spec.seed = 11;
  spec.era_fraction_validation = 0.4;
  SubgroupSpec g;
  g.n_patients = 6;
  for (auto& ch : g.channels) ch = {80.0, 0.5, 1.0};
  g.icu_death_prob = 0.3;
  g.hospital_death_prob = 0.5;
  spec.subgroups = {g};
  const auto synth = generate_synthetic_cohort(spec, 5);

  const auto ts_path = dir / "vt_round_ts.csv";
  const auto st_path = dir / "vt_round_st.csv";
  write_timeseries_csv(synth.cohort.series, ts_path);
  std::vector<StaticRecord> recs;
  for (const auto& s : synth.cohort.series)
    recs.push_back(synth.cohort.statics.at(s.patient_id));
  write_static_csv(recs, st_path);

  const auto ts = parse_timeseries_csv(ts_path);
  const auto st = parse_static_csv(st_path);
  CHECK(ts.errors.empty());
  CHECK(st.errors.empty());
  const Cohort back = apply_cohort_filters(ts.observations, st.records, 5);
  REQUIRE(back.size() == synth.cohort.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back.series[i].patient_id == synth.cohort.series[i].patient_id);
    CHECK(back.series[i].grid == synth.cohort.series[i].grid);
  }
  for (const auto& [id, rec] : back.statics) {
    const auto& orig = synth.cohort.statics.at(id);
    CHECK(rec.age == orig.age);
    CHECK(rec.icu_death == orig.icu_death);
    CHECK(rec.hospital_death == orig.hospital_death);
    CHECK(rec.era == orig.era);
  }
}

TEST_CASE("synthetic cohorts replay exactly per seed") {
  SyntheticSpec spec;
  spec.seed = 77;
  spec.era_fraction_validation = 0.25;
  SubgroupSpec a;
  a.n_patients = 10;
  for (auto& ch : a.channels) ch = {90.0, -1.0, 2.0};
  a.icu_death_prob = 0.1;
  a.hospital_death_prob = 0.2;
  SubgroupSpec b = a;
  b.icu_death_prob = 0.4;
  b.hospital_death_prob = 0.4;
  spec.subgroups = {a, b};

  const auto s1 = generate_synthetic_cohort(spec, 8);
  const auto s2 = generate_synthetic_cohort(spec, 8);
  REQUIRE(s1.cohort.size() == 20);
  for (std::size_t i = 0; i < 20; ++i)
    CHECK(s1.cohort.series[i].grid == s2.cohort.series[i].grid);
  CHECK(s1.true_subgroup == s2.true_subgroup);

  spec.seed = 78;
  const auto s3 = generate_synthetic_cohort(spec, 8);
  bool differs = false;
  for (std::size_t i = 0; i < 20 && !differs; ++i)
    differs = s1.cohort.series[i].grid != s3.cohort.series[i].grid;
  CHECK(differs);
}

TEST_CASE("synthetic mortality draws keep icu -> hospital") {
  SyntheticSpec spec;
  spec.seed = 3;
  spec.era_fraction_validation = 0.5;
  SubgroupSpec g;
  g.n_patients = 200;
  for (auto& ch : g.channels) ch = {50.0, 0.0, 1.0};
  g.icu_death_prob = 0.3;
  g.hospital_death_prob = 0.6;
  spec.subgroups = {g};
  const auto synth = generate_synthetic_cohort(spec, 4);
  int icu = 0, hosp = 0;
  for (const auto& [id, rec] : synth.cohort.statics) {
    if (rec.icu_death) CHECK(rec.hospital_death);
    icu += rec.icu_death;
    hosp += rec.hospital_death;
  }
  CHECK(icu > 30);
  CHECK(hosp > icu);
  CHECK(validate_cohort(synth.cohort).empty());
}

TEST_CASE("synthetic spec validation rejects bad fields") {
  SyntheticSpec spec;
  spec.seed = 1;
  spec.era_fraction_validation = 0.2;
  SubgroupSpec g;
  g.n_patients = 5;
  for (auto& ch : g.channels) ch = {50.0, 0.0, 1.0};
  g.icu_death_prob = 0.5;
  g.hospital_death_prob = 0.4;  // below icu
  spec.subgroups = {g};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.subgroups[0].hospital_death_prob = 0.6;
  CHECK_NOTHROW(spec.validate());
  spec.era_fraction_validation = 1.5;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("truth csv lists patients in cohort order") {
  SyntheticSpec spec;
  spec.seed = 9;
  spec.era_fraction_validation = 0.0;
  SubgroupSpec g;
  g.n_patients = 3;
  for (auto& ch : g.channels) ch = {10.0, 0.0, 0.5};
  g.hospital_death_prob = 0.1;
  spec.subgroups = {g, g};
  const auto synth = generate_synthetic_cohort(spec, 4);
  const auto p = std::filesystem::temp_directory_path() / "vt_truth.csv";
  write_truth_csv(synth, p);
  const auto csv = textio::read_csv(p);
  REQUIRE(csv.header == std::vector<std::string>{"patient_id", "true_subgroup"});
  REQUIRE(csv.rows.size() == 6);
  CHECK(csv.rows[0].fields[1] == "0");
  CHECK(csv.rows[5].fields[1] == "1");
}

TEST_SUITE_END();
