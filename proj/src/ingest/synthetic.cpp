#include "vitalclust/ingest/synthetic.hpp"

#include <json.hpp>
#include <stdexcept>

#include "vitalclust/core/rng.hpp"
#include "vitalclust/core/textio.hpp"

namespace vitalclust::ingest {

void SyntheticSpec::validate() const {
  if (subgroups.empty())
    throw std::invalid_argument("synthetic spec: no subgroups");
  if (!(era_fraction_validation >= 0.0 && era_fraction_validation <= 1.0))
    throw std::invalid_argument("synthetic spec: era_fraction_validation not in [0,1]");
  for (std::size_t g = 0; g < subgroups.size(); ++g) {
    const auto& s = subgroups[g];
    const std::string where = "subgroup " + std::to_string(g);
    if (s.n_patients <= 0)
      throw std::invalid_argument("synthetic spec: " + where + ": n must be positive");
    auto in01 = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!in01(s.icu_death_prob) || !in01(s.hospital_death_prob))
      throw std::invalid_argument("synthetic spec: " + where +
                                  ": probabilities must be in [0,1]");
    if (s.icu_death_prob > s.hospital_death_prob)
      throw std::invalid_argument("synthetic spec: " + where +
                                  ": icu probability exceeds hospital probability");
    for (const auto& c : s.channels)
      if (c.noise_std < 0)
        throw std::invalid_argument("synthetic spec: " + where +
                                    ": negative noise_std");
  }
}

SyntheticSpec SyntheticSpec::load_json(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(textio::read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("synthetic spec " + path.string() + ": " + e.what());
  }

  SyntheticSpec spec;
  try {
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.era_fraction_validation = j.at("era_fraction_validation").get<double>();
    for (const auto& sg : j.at("subgroups")) {
      SubgroupSpec s;
      s.n_patients = sg.at("n").get<int>();
      s.icu_death_prob = sg.at("mortality").at("icu").get<double>();
      s.hospital_death_prob = sg.at("mortality").at("hospital").get<double>();
      const auto& channels = sg.at("channels");
      for (int c = 0; c < kNumChannels; ++c) {
        const auto& ch = channels.at(std::string(
            channel_code(static_cast<VitalChannel>(c))));
        s.channels[static_cast<std::size_t>(c)] = {
            ch.at("baseline").get<double>(), ch.at("slope").get<double>(),
            ch.at("noise_std").get<double>()};
      }
      spec.subgroups.push_back(s);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("synthetic spec " + path.string() + ": " + e.what());
  }
  spec.validate();
  return spec;
}

SyntheticCohort generate_synthetic_cohort(const SyntheticSpec& spec,
                                          int timesteps) {
  spec.validate();
  if (timesteps < 3)
    throw std::invalid_argument("generate_synthetic_cohort: timesteps < 3");

  int total = 0;
  for (const auto& s : spec.subgroups) total += s.n_patients;
  int width = 1;
  for (int v = total; v >= 10; v /= 10) ++width;

  SeededRng rng(spec.seed);
  SyntheticCohort out;
  out.cohort.series.reserve(static_cast<std::size_t>(total));

  int index = 0;
  for (std::size_t g = 0; g < spec.subgroups.size(); ++g) {
    const auto& sub = spec.subgroups[g];
    for (int p = 0; p < sub.n_patients; ++p, ++index) {
      std::string id = std::to_string(index);
      id = "p" + std::string(static_cast<std::size_t>(width) - id.size(), '0') + id;

      VitalGrid grid(kNumChannels, timesteps);
      for (int c = 0; c < kNumChannels; ++c) {
        const auto& arch = sub.channels[static_cast<std::size_t>(c)];
        // Normal(0, 0) adds exactly zero, so the draw order is the same
        // whether or not a channel is noiseless.
        for (int t = 0; t < timesteps; ++t)
          grid(c, t) = arch.baseline + arch.slope * t +
                       rng.normal(0.0, arch.noise_std);
      }

      StaticRecord rec;
      rec.patient_id = id;
      const double u_death = rng.uniform01();
      rec.icu_death = u_death < sub.icu_death_prob;
      rec.hospital_death = u_death < sub.hospital_death_prob;
      rec.era = rng.uniform01() < spec.era_fraction_validation
                    ? Era::Validation
                    : Era::Development;
      rec.age = 18 + static_cast<int>(rng.uniform01() * 73.0);
      rec.gender = rng.uniform01() < 0.5 ? "F" : "M";

      out.cohort.series.push_back({id, std::move(grid)});
      out.cohort.statics.emplace(id, std::move(rec));
      out.true_subgroup.emplace(id, static_cast<int>(g));
    }
  }
  return out;
}

void write_truth_csv(const SyntheticCohort& synth,
                     const std::filesystem::path& path) {
  std::string out = "patient_id,true_subgroup\n";
  for (const auto& s : synth.cohort.series) {
    out += textio::csv_escape(s.patient_id) + "," +
           std::to_string(synth.true_subgroup.at(s.patient_id)) + "\n";
  }
  textio::write_text_file(path, out);
}

}  // namespace vitalclust::ingest
