#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vitalclust/core/types.hpp"

namespace vitalclust::ingest {

struct ChannelArchetype {
  double baseline = 0;
  double slope = 0;      // per hour
  double noise_std = 0;
};

struct SubgroupSpec {
  int n_patients = 0;
  std::array<ChannelArchetype, kNumChannels> channels{};
  double icu_death_prob = 0;
  double hospital_death_prob = 0;  // >= icu_death_prob
};

struct SyntheticSpec {
  std::vector<SubgroupSpec> subgroups;
  std::uint64_t seed = 0;
  double era_fraction_validation = 0;

  void validate() const;  // throws std::invalid_argument on bad fields

  /// Loads the JSON spec format documented in configs/synth_default.json.
  static SyntheticSpec load_json(const std::filesystem::path& path);
};

struct SyntheticCohort {
  Cohort cohort;
  std::map<std::string, int> true_subgroup;  // patient_id -> planted label
};

/// Deterministic for a fixed seed: one mt19937_64 stream consumed in a
/// fixed order (patients in index order; per patient: channels in
/// canonical order x hours ascending, then one coupled mortality draw,
/// then era, then age, then gender). Mortality uses a single uniform u
/// per patient, icu = u < p_icu and hospital = u < p_hosp, which keeps
/// icu-death implying hospital-death exactly.
SyntheticCohort generate_synthetic_cohort(const SyntheticSpec& spec,
                                          int timesteps = 8);

void write_truth_csv(const SyntheticCohort& synth, const std::filesystem::path& path);

}  // namespace vitalclust::ingest
